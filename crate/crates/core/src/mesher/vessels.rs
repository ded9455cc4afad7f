//! Solid models of the tableware pieces.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::clip::{tilt_cut, ClipError, TiltPlane};
use super::helix::{spiral_points, SpiralError};
use super::mesh::TriangleMesh;
use super::perforate::{perforate, CupShell, PerforateError};
use super::pie::{pie_segment, PieError};
use super::revolve::{revolve, Profile2D, ProfileError};
use crate::encoder::{DeepPlateSpec, FlatPlateSpec, JugSpec, MugSpec, SegmentPlateSpec};

/// Physical dimensions the data does not determine. Millimeters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FabricationConfig {
    pub wall_thickness: f64,
    pub base_thickness: f64,
    pub revolve_segments: usize,
    pub plate_height: f64,
    pub plate_floor: f64,
    pub plate_rim: f64,
    pub concrete_segment_thickness: f64,
    pub deep_plate_height: f64,
    pub deep_plate_floor: f64,
    pub deep_plate_foot_ratio: f64,
    pub firing_kwh_per_piece: f64,
}

impl Default for FabricationConfig {
    fn default() -> Self {
        Self {
            wall_thickness: 4.0,
            base_thickness: 4.0,
            revolve_segments: 256,
            plate_height: 18.0,
            plate_floor: 6.0,
            plate_rim: 12.0,
            concrete_segment_thickness: 3.0,
            deep_plate_height: 70.0,
            deep_plate_floor: 8.0,
            deep_plate_foot_ratio: 0.64,
            firing_kwh_per_piece: 3.5,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VesselMeshError {
    #[error("fabrication setting `{0}` is out of range")]
    Config(&'static str),
    #[error(transparent)]
    Spiral(#[from] SpiralError),
    #[error(transparent)]
    Perforate(#[from] PerforateError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Pie(#[from] PieError),
    #[error(transparent)]
    Clip(#[from] ClipError),
}

impl FabricationConfig {
    pub fn validate(&self) -> Result<(), VesselMeshError> {
        for (key, v) in [
            ("wall_thickness", self.wall_thickness),
            ("base_thickness", self.base_thickness),
            ("plate_height", self.plate_height),
            ("plate_floor", self.plate_floor),
            ("plate_rim", self.plate_rim),
            ("concrete_segment_thickness", self.concrete_segment_thickness),
            ("deep_plate_height", self.deep_plate_height),
            ("deep_plate_floor", self.deep_plate_floor),
            ("firing_kwh_per_piece", self.firing_kwh_per_piece),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(VesselMeshError::Config(key));
            }
        }
        if self.revolve_segments < 3 {
            return Err(VesselMeshError::Config("revolve_segments"));
        }
        if self.plate_floor >= self.plate_height {
            return Err(VesselMeshError::Config("plate_floor"));
        }
        if self.deep_plate_floor >= self.deep_plate_height {
            return Err(VesselMeshError::Config("deep_plate_floor"));
        }
        if !(self.deep_plate_foot_ratio > 0.0 && self.deep_plate_foot_ratio < 1.0) {
            return Err(VesselMeshError::Config("deep_plate_foot_ratio"));
        }
        Ok(())
    }
}

/// The mug body: its wall rises one pitch above the spiral's encoded
/// height so the last turn and its perforations stay on the wall.
pub fn mug_shell(spec: &MugSpec, fab: &FabricationConfig) -> CupShell {
    CupShell {
        outer_radius: spec.diameter / 2.0,
        wall: fab.wall_thickness,
        base: fab.base_thickness,
        depth: spec.height + spec.pitch,
        segments: fab.revolve_segments,
    }
}

pub fn mug_mesh(spec: &MugSpec, perforation_radius: f64, fab: &FabricationConfig) -> Result<TriangleMesh, VesselMeshError> {
    let centers = spiral_points(spec)?;
    Ok(perforate(&mug_shell(spec, fab), &centers, perforation_radius)?)
}

pub fn jug_shell(spec: &JugSpec, fab: &FabricationConfig) -> CupShell {
    CupShell {
        outer_radius: spec.diameter / 2.0,
        wall: fab.wall_thickness,
        base: fab.base_thickness,
        depth: spec.height,
        segments: fab.revolve_segments,
    }
}

pub fn jug_mesh(spec: &JugSpec, fab: &FabricationConfig) -> Result<TriangleMesh, VesselMeshError> {
    Ok(jug_shell(spec, fab).mesh()?)
}

/// Concrete filling the jug cavity over the sector angle; empty when the
/// shoreline is entirely natural.
pub fn jug_concrete_mesh(spec: &JugSpec, fab: &FabricationConfig) -> Result<TriangleMesh, VesselMeshError> {
    if spec.concrete_sector_angle <= 0.0 {
        return Ok(TriangleMesh::default());
    }
    let shell = jug_shell(spec, fab);
    Ok(pie_segment(shell.inner_radius(), shell.depth, spec.concrete_sector_angle)?)
}

/// Flat-bottomed tray with an upright rim.
pub fn tray_profile(diameter: f64, fab: &FabricationConfig) -> Result<Profile2D, VesselMeshError> {
    let r = diameter / 2.0;
    let inner = r - fab.plate_rim;
    if inner <= 0.0 {
        return Err(VesselMeshError::Config("plate_rim"));
    }
    Ok(Profile2D::new(vec![
        [0.0, 0.0],
        [r, 0.0],
        [r, fab.plate_height],
        [inner, fab.plate_height],
        [inner, fab.plate_floor],
        [0.0, fab.plate_floor],
    ])?)
}

pub fn segment_plate_mesh(spec: &SegmentPlateSpec, fab: &FabricationConfig) -> Result<TriangleMesh, VesselMeshError> {
    Ok(revolve(&tray_profile(spec.diameter, fab)?, fab.revolve_segments)?)
}

/// Concrete segment laid on the tray floor, or `None` when suppressed.
pub fn segment_plate_concrete_mesh(
    spec: &SegmentPlateSpec,
    fab: &FabricationConfig,
) -> Result<Option<TriangleMesh>, VesselMeshError> {
    if spec.suppressed || spec.segment_angle <= 0.0 {
        return Ok(None);
    }
    let radius = spec.diameter / 2.0 - fab.plate_rim;
    let segment = pie_segment(radius, fab.concrete_segment_thickness, spec.segment_angle)?;
    Ok(Some(segment.translated([0.0, 0.0, fab.plate_floor])))
}

/// The bowl as cast, before the slope cut.
pub fn deep_plate_uncut_mesh(spec: &DeepPlateSpec, fab: &FabricationConfig) -> Result<TriangleMesh, VesselMeshError> {
    let r = spec.diameter / 2.0;
    let foot = r * fab.deep_plate_foot_ratio;
    let h = fab.deep_plate_height;
    let w = fab.wall_thickness;
    let f = fab.deep_plate_floor;
    // Inner wall parallel to the outer one, offset horizontally by `w`.
    let inner_foot = foot + (r - foot) * f / h - w;
    let profile = Profile2D::new(vec![
        [0.0, 0.0],
        [foot, 0.0],
        [r, h],
        [r - w, h],
        [inner_foot, f],
        [0.0, f],
    ])?;
    Ok(revolve(&profile, fab.revolve_segments)?)
}

/// Cutting plane for a deep plate: hinged on the rim at `x = -r` and
/// tilted towards +x, so steeper slopes only ever remove material.
pub fn deep_plate_plane(spec: &DeepPlateSpec, fab: &FabricationConfig) -> TiltPlane {
    TiltPlane {
        pivot: [-spec.diameter / 2.0, 0.0, fab.deep_plate_height],
        tilt_deg: spec.tilt_angle,
    }
}

pub fn deep_plate_mesh(spec: &DeepPlateSpec, fab: &FabricationConfig) -> Result<TriangleMesh, VesselMeshError> {
    let uncut = deep_plate_uncut_mesh(spec, fab)?;
    Ok(tilt_cut(&uncut, deep_plate_plane(spec, fab))?)
}

/// Tray that carries the glass sheet, as wide as the smaller frame side.
pub fn flat_plate_mesh(spec: &FlatPlateSpec, fab: &FabricationConfig) -> Result<TriangleMesh, VesselMeshError> {
    let diameter = spec.frame.0.min(spec.frame.1);
    Ok(revolve(&tray_profile(diameter, fab)?, fab.revolve_segments)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{encode_all, sample_record, EncoderConfig};
    use crate::mesher::mesh::mesh_stats;

    #[test]
    fn defaults_validate() {
        FabricationConfig::default().validate().unwrap();
        let bad = FabricationConfig {
            plate_floor: 30.0,
            ..Default::default()
        };
        assert_eq!(bad.validate(), Err(VesselMeshError::Config("plate_floor")));
    }

    #[test]
    fn every_piece_is_a_closed_positive_solid() {
        let cfg = EncoderConfig::default();
        let fab = FabricationConfig::default();
        let set = encode_all(&sample_record(), &cfg).unwrap();
        let meshes = [
            mug_mesh(&set.mug, cfg.perforation_radius, &fab).unwrap(),
            jug_mesh(&set.jug, &fab).unwrap(),
            jug_concrete_mesh(&set.jug, &fab).unwrap(),
            segment_plate_mesh(&set.small_plate, &fab).unwrap(),
            segment_plate_concrete_mesh(&set.small_plate, &fab).unwrap().unwrap(),
            deep_plate_uncut_mesh(&set.deep_plate, &fab).unwrap(),
            deep_plate_mesh(&set.deep_plate, &fab).unwrap(),
            flat_plate_mesh(&set.flat_plate, &fab).unwrap(),
        ];
        for (k, m) in meshes.iter().enumerate() {
            let s = mesh_stats(m);
            assert!(s.watertight, "{k}");
            assert!(s.signed_volume_mm3 > 0.0, "{k}");
            assert_eq!(s.degenerate_triangles, 0, "{k}");
        }
        assert_eq!(mesh_stats(&meshes[0]).genus, Some(i64::from(set.mug.perforation_count)));
    }

    #[test]
    fn jug_concrete_matches_fraction() {
        let cfg = EncoderConfig::default();
        let fab = FabricationConfig::default();
        let set = encode_all(&sample_record(), &cfg).unwrap();
        let concrete = jug_concrete_mesh(&set.jug, &fab).unwrap().signed_volume();
        let cavity = jug_shell(&set.jug, &fab).cavity_volume();
        assert!((concrete / cavity - set.jug.concrete_fraction).abs() < 0.01 * set.jug.concrete_fraction);
    }

    #[test]
    fn natural_shoreline_has_no_concrete() {
        let mut r = sample_record();
        r.artificial_shoreline = 0.0;
        let set = encode_all(&r, &EncoderConfig::default()).unwrap();
        assert!(jug_concrete_mesh(&set.jug, &FabricationConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn deep_plate_cut_never_reaches_the_floor() {
        let fab = FabricationConfig::default();
        let spec = DeepPlateSpec {
            diameter: 220.0,
            slope: 25.0,
            tilt_angle: 25f64.atan2(100.0).to_degrees(),
        };
        let cut = deep_plate_mesh(&spec, &fab).unwrap();
        let (_, hi) = cut.bbox().unwrap();
        assert!((hi[2] - fab.deep_plate_height).abs() < 1e-3, "{hi:?}");
        // Every vertex on the cut face stays above the interior floor.
        let plane = deep_plate_plane(&spec, &fab);
        let n = plane.normal();
        let on_cut: Vec<f64> = cut
            .vertices
            .iter()
            .filter(|v| (0..3).map(|k| n[k] * (v[k] - plane.pivot[k])).sum::<f64>().abs() < 1e-3)
            .map(|v| v[2])
            .collect();
        assert!(on_cut.len() > 100);
        assert!(on_cut.iter().all(|z| *z > fab.deep_plate_floor));
    }
}
