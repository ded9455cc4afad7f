use serde::{Deserialize, Serialize};

/// Concrete and kiln energy for a collection. Concrete is reported as
/// concrete, inserts and segments alike.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialsEstimate {
    pub concrete_volume_mm3: f64,
    pub concrete_mass_kg: f64,
    pub pieces: usize,
    pub firing_kwh_per_piece: f64,
    pub firing_energy_kwh: f64,
}

/// `density` in kg/m³.
pub fn materials_estimate(
    concrete_volumes_mm3: &[f64],
    pieces: usize,
    density: f64,
    firing_kwh_per_piece: f64,
) -> MaterialsEstimate {
    let volume: f64 = concrete_volumes_mm3.iter().sum();
    MaterialsEstimate {
        concrete_volume_mm3: volume,
        concrete_mass_kg: volume * 1e-9 * density,
        pieces,
        firing_kwh_per_piece,
        firing_energy_kwh: firing_kwh_per_piece * pieces as f64,
    }
}
