//! Concrete pie-chart segments.

use std::f64::consts::TAU;

use thiserror::Error;

use super::mesh::{dot, face_normal, Point3, TriangleMesh};
use super::revolve::{revolve, Profile2D};

/// Facets per full turn; partial sectors use a proportional share.
pub const PIE_SEGMENTS_PER_TURN: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PieError {
    #[error("segment angle must lie within (0, 360], got {0}")]
    Angle(f64),
    #[error("radius and thickness must be positive, got {radius} and {thickness}")]
    Size { radius: f64, thickness: f64 },
}

/// Solid sector of a disc lying on `z = 0`, starting at the +x axis and
/// sweeping counter-clockwise by `angle_deg`.
pub fn pie_segment(outer_radius: f64, thickness: f64, angle_deg: f64) -> Result<TriangleMesh, PieError> {
    if !(angle_deg > 0.0 && angle_deg <= 360.0) {
        return Err(PieError::Angle(angle_deg));
    }
    if !(outer_radius > 0.0 && thickness > 0.0 && outer_radius.is_finite() && thickness.is_finite()) {
        return Err(PieError::Size {
            radius: outer_radius,
            thickness,
        });
    }
    if angle_deg == 360.0 {
        let profile = Profile2D::rectangle(0.0, outer_radius, 0.0, thickness).expect("positive rectangle");
        return Ok(revolve(&profile, PIE_SEGMENTS_PER_TURN).expect("segments >= 3"));
    }
    let n = ((PIE_SEGMENTS_PER_TURN as f64 * angle_deg / 360.0).ceil() as usize).max(1);
    let sweep = angle_deg.to_radians();
    let mut mesh = TriangleMesh::default();
    let bottom_center = mesh.push_vertex([0.0, 0.0, 0.0]);
    let top_center = mesh.push_vertex([0.0, 0.0, thickness]);
    let arc: Vec<(u32, u32)> = (0..=n)
        .map(|k| {
            // Exact multiples keep sectors proportional to the full disc.
            let t = if k == n { sweep } else { TAU * k as f64 / PIE_SEGMENTS_PER_TURN as f64 };
            let (x, y) = (outer_radius * t.cos(), outer_radius * t.sin());
            (mesh.push_vertex([x, y, 0.0]), mesh.push_vertex([x, y, thickness]))
        })
        .collect();
    let down = [0.0, 0.0, -1.0];
    let up = [0.0, 0.0, 1.0];
    for k in 0..n {
        let (b0, t0) = arc[k];
        let (b1, t1) = arc[k + 1];
        push_oriented(&mut mesh, [bottom_center, b0, b1], down);
        push_oriented(&mut mesh, [top_center, t0, t1], up);
        let mid = (mesh.vertices[b0 as usize], mesh.vertices[b1 as usize]);
        let outward = [mid.0[0] + mid.1[0], mid.0[1] + mid.1[1], 0.0];
        push_oriented(&mut mesh, [b0, b1, t1], outward);
        push_oriented(&mut mesh, [b0, t1, t0], outward);
    }
    let (b0, t0) = arc[0];
    let (bn, tn) = arc[n];
    let start_out = [0.0, -1.0, 0.0];
    let end_out = [-sweep.sin(), sweep.cos(), 0.0];
    push_oriented(&mut mesh, [bottom_center, b0, t0], start_out);
    push_oriented(&mut mesh, [bottom_center, t0, top_center], start_out);
    push_oriented(&mut mesh, [bottom_center, bn, tn], end_out);
    push_oriented(&mut mesh, [bottom_center, tn, top_center], end_out);
    Ok(mesh)
}

/// Appends a triangle wound so that its normal points along `outward`.
pub(crate) fn push_oriented(mesh: &mut TriangleMesh, mut t: [u32; 3], outward: Point3) {
    if dot(face_normal(mesh.corners(t)), outward) < 0.0 {
        t.swap(1, 2);
    }
    mesh.triangles.push(t);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesher::mesh::mesh_stats;
    use std::f64::consts::PI;

    #[test]
    fn full_disc_is_seamless() {
        let m = pie_segment(80.0, 5.0, 360.0).unwrap();
        let s = mesh_stats(&m);
        assert!(s.watertight);
        assert_eq!(s.euler, 2);
        let exact = PI * 80.0 * 80.0 * 5.0;
        assert!((s.signed_volume_mm3 - exact).abs() / exact < 0.005);
        // No vertex sits on a seam wall: only the two axis points are interior.
        assert_eq!(s.vertices, 2 + 2 * PIE_SEGMENTS_PER_TURN);
    }

    #[test]
    fn quarter_is_proportional() {
        let full = pie_segment(80.0, 5.0, 360.0).unwrap().signed_volume();
        let quarter = pie_segment(80.0, 5.0, 90.0).unwrap().signed_volume();
        assert!((quarter * 4.0 - full).abs() < 1e-9 * full);
    }

    #[test]
    fn sliver_and_reflex_sectors_are_closed() {
        for angle in [0.5, 45.0, 181.0, 359.9] {
            let s = mesh_stats(&pie_segment(80.0, 3.0, angle).unwrap());
            assert!(s.watertight, "{angle}");
            assert_eq!(s.degenerate_triangles, 0);
            assert!(s.signed_volume_mm3 > 0.0);
            let sector = 0.5 * 80.0f64.powi(2) * angle.to_radians() * 3.0;
            assert!((s.signed_volume_mm3 - sector).abs() / sector < 0.005, "{angle}");
        }
    }

    #[test]
    fn rejects_bad_angles() {
        assert_eq!(pie_segment(1.0, 1.0, 0.0), Err(PieError::Angle(0.0)));
        assert!(pie_segment(1.0, 1.0, -5.0).is_err());
        assert!(pie_segment(1.0, 1.0, 360.5).is_err());
        assert!(pie_segment(0.0, 1.0, 90.0).is_err());
    }
}
