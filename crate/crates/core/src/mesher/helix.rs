//! Perforation centers along the reedbed spiral.

use std::f64::consts::TAU;

use thiserror::Error;

use super::mesh::Point3;
use crate::encoder::MugSpec;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{count} perforations at {spacing} mm exceed the {length} mm spiral")]
pub struct SpiralError {
    pub count: u32,
    pub spacing: f64,
    pub length: f64,
}

/// Helix of radius `D/2` and pitch `p`, starting at angle 0 and height
/// `p/2`. Point `i` (1-based) sits `i * spacing` along the arc.
pub fn spiral_points(spec: &MugSpec) -> Result<Vec<Point3>, SpiralError> {
    let count = spec.perforation_count;
    let spacing = spec.perforation_spacing_along_spiral;
    let used = f64::from(count) * spacing;
    if used > spec.spiral_length * (1.0 + 1e-12) {
        return Err(SpiralError {
            count,
            spacing,
            length: spec.spiral_length,
        });
    }
    let radius = spec.diameter / 2.0;
    let turn = (std::f64::consts::PI * spec.diameter).hypot(spec.pitch);
    Ok((1..=count)
        .map(|i| {
            let u = f64::from(i) * spacing / turn;
            let theta = TAU * u;
            [radius * theta.cos(), radius * theta.sin(), spec.pitch / 2.0 + spec.pitch * u]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{encode_mug, EncoderConfig};
    use crate::encoder::sample_record;

    /// Arc length between helix parameters by summing fine chords.
    fn arc_between(spec: &MugSpec, a: Point3, b: Point3) -> f64 {
        let r = spec.diameter / 2.0;
        let ta = (a[2] - spec.pitch / 2.0) / spec.pitch * TAU;
        let tb = (b[2] - spec.pitch / 2.0) / spec.pitch * TAU;
        let steps = 20_000;
        let at = |t: f64| [r * t.cos(), r * t.sin(), spec.pitch / 2.0 + spec.pitch * t / TAU];
        let mut prev = at(ta);
        let mut total = 0.0;
        for k in 1..=steps {
            let p = at(ta + (tb - ta) * k as f64 / steps as f64);
            total += ((p[0] - prev[0]).powi(2) + (p[1] - prev[1]).powi(2) + (p[2] - prev[2]).powi(2)).sqrt();
            prev = p;
        }
        total
    }

    #[test]
    fn points_follow_the_helix_at_the_spacing() {
        let spec = encode_mug(&sample_record(), &EncoderConfig::default()).unwrap();
        let pts = spiral_points(&spec).unwrap();
        assert_eq!(pts.len(), spec.perforation_count as usize);
        for p in &pts {
            assert!((p[0].hypot(p[1]) - spec.diameter / 2.0).abs() < 1e-9);
        }
        for w in pts.windows(2) {
            let d = arc_between(&spec, w[0], w[1]);
            assert!((d - spec.perforation_spacing_along_spiral).abs() < 1e-6, "{d}");
        }
        let start = [spec.diameter / 2.0, 0.0, spec.pitch / 2.0];
        assert!((arc_between(&spec, start, pts[0]) - spec.perforation_spacing_along_spiral).abs() < 1e-6);
    }

    #[test]
    fn no_cuts_no_points() {
        let mut record = sample_record();
        record.reedbed_cuts = 0;
        let spec = encode_mug(&record, &EncoderConfig::default()).unwrap();
        assert!(spiral_points(&spec).unwrap().is_empty());
    }

    #[test]
    fn overlong_spacing_is_rejected() {
        let mut spec = encode_mug(&sample_record(), &EncoderConfig::default()).unwrap();
        spec.perforation_spacing_along_spiral = spec.spiral_length;
        assert!(spiral_points(&spec).is_err());
    }
}
