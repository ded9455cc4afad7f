use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodata::MapScale;

/// Constants of the data-to-form mapping. Lengths in millimeters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncoderConfig {
    pub mug_diameter: f64,
    pub spiral_pitch: f64,
    pub map_scale_reedbed: MapScale,
    pub map_scale_shoreline_outline: MapScale,
    pub jug_diameter_tall: f64,
    pub jug_diameter_short: f64,
    pub jug_tall_threshold: f64,
    pub perforation_radius: f64,
    pub small_plate_diameter: f64,
    /// Segments narrower than this many degrees are not cast.
    pub small_plate_min_angle: f64,
    pub deep_plate_diameter: f64,
    pub flat_plate_frame: [f64; 2],
    pub serving_plate_diameter: f64,
    /// kg/m³
    pub concrete_density: f64,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            mug_diameter: 80.0,
            spiral_pitch: 5.0,
            map_scale_reedbed: MapScale::new(1000.0).expect("positive"),
            map_scale_shoreline_outline: MapScale::new(22_400.0).expect("positive"),
            jug_diameter_tall: 90.0,
            jug_diameter_short: 90.0,
            jug_tall_threshold: 120.0,
            perforation_radius: 2.0,
            small_plate_diameter: 160.0,
            small_plate_min_angle: 2.0,
            deep_plate_diameter: 220.0,
            flat_plate_frame: [260.0, 260.0],
            serving_plate_diameter: 300.0,
            concrete_density: 2400.0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("`{key}` must be positive and finite, got {value}")]
    NonPositive { key: &'static str, value: f64 },
    #[error("small_plate_min_angle must lie within [0, 360), got {0}")]
    MinAngle(f64),
    #[error("perforation_radius {radius} must be below half the spiral pitch {pitch}")]
    PerforationTooWide { radius: f64, pitch: f64 },
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, value) in [
            ("mug_diameter", self.mug_diameter),
            ("spiral_pitch", self.spiral_pitch),
            ("jug_diameter_tall", self.jug_diameter_tall),
            ("jug_diameter_short", self.jug_diameter_short),
            ("jug_tall_threshold", self.jug_tall_threshold),
            ("perforation_radius", self.perforation_radius),
            ("small_plate_diameter", self.small_plate_diameter),
            ("deep_plate_diameter", self.deep_plate_diameter),
            ("flat_plate_frame", self.flat_plate_frame[0]),
            ("flat_plate_frame", self.flat_plate_frame[1]),
            ("serving_plate_diameter", self.serving_plate_diameter),
            ("concrete_density", self.concrete_density),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::NonPositive { key, value });
            }
        }
        if !(0.0..360.0).contains(&self.small_plate_min_angle) {
            return Err(ConfigError::MinAngle(self.small_plate_min_angle));
        }
        if self.perforation_radius >= self.spiral_pitch / 2.0 {
            return Err(ConfigError::PerforationTooWide {
                radius: self.perforation_radius,
                pitch: self.spiral_pitch,
            });
        }
        Ok(())
    }

    /// Helix length of one turn around the mug.
    pub fn spiral_turn_length(&self) -> f64 {
        (std::f64::consts::PI * self.mug_diameter).hypot(self.spiral_pitch)
    }

    /// Millimeters of vessel height per meter of encoded shoreline data,
    /// shared by mugs (reedbed) and jugs (coastline).
    pub fn height_mm_per_data_meter(&self) -> f64 {
        self.map_scale_reedbed.meters_to_model_mm(1.0) * self.spiral_pitch / self.spiral_turn_length()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        EncoderConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_wide_perforations_and_bad_angles() {
        let mut c = EncoderConfig {
            perforation_radius: 2.5,
            ..Default::default()
        };
        assert!(matches!(c.validate(), Err(ConfigError::PerforationTooWide { .. })));
        c.perforation_radius = 2.0;
        c.small_plate_min_angle = 360.0;
        assert_eq!(c.validate(), Err(ConfigError::MinAngle(360.0)));
        c.small_plate_min_angle = 2.0;
        c.mug_diameter = 0.0;
        assert!(matches!(c.validate(), Err(ConfigError::NonPositive { key: "mug_diameter", .. })));
    }
}
