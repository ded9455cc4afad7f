//! Solids of revolution about the z axis.

use std::f64::consts::TAU;

use thiserror::Error;

use super::mesh::TriangleMesh;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("profile needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("profile vertex {0} has negative or non-finite radius")]
    BadRadius(usize),
    #[error("profile vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("profile edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
    #[error("profile encloses no area")]
    ZeroArea,
    #[error("revolve needs at least 3 segments, got {0}")]
    TooFewSegments(usize),
}

/// Closed cross-section in the `(r, z)` half-plane. The closing edge is
/// implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile2D {
    points: Vec<[f64; 2]>,
}

impl Profile2D {
    pub fn new(mut points: Vec<[f64; 2]>) -> Result<Self, ProfileError> {
        if points.len() > 1 && points.first() == points.last() {
            points.pop();
        }
        let n = points.len();
        if n < 3 {
            return Err(ProfileError::TooFewVertices(n));
        }
        if let Some(i) = points
            .iter()
            .position(|p| !(p[0] >= 0.0) || !p[0].is_finite() || !p[1].is_finite())
        {
            return Err(ProfileError::BadRadius(i));
        }
        for i in 0..n {
            for j in i + 1..n {
                if points[i] == points[j] {
                    return Err(ProfileError::RepeatedVertex(i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a, b) = (points[i], points[(i + 1) % n]);
                let (c, d) = (points[j], points[(j + 1) % n]);
                if adjacent {
                    // Adjacent edges share one vertex; they may only overlap
                    // by folding back on themselves.
                    let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    if collinear_overlap(shared, p, q) {
                        return Err(ProfileError::SelfIntersecting(i, j));
                    }
                } else if segments_touch(a, b, c, d) {
                    return Err(ProfileError::SelfIntersecting(i, j));
                }
            }
        }
        let profile = Self { points };
        if profile.signed_area() == 0.0 {
            return Err(ProfileError::ZeroArea);
        }
        Ok(profile)
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| {
                let a = self.points[i];
                let b = self.points[(i + 1) % n];
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
            * 0.5
    }

    /// Rectangle `[r0, r1] x [z0, z1]`.
    pub fn rectangle(r0: f64, r1: f64, z0: f64, z1: f64) -> Result<Self, ProfileError> {
        Self::new(vec![[r0, z0], [r1, z0], [r1, z1], [r0, z1]])
    }
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn within(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_touch(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && within(c, d, a))
        || (d2 == 0.0 && within(c, d, b))
        || (d3 == 0.0 && within(a, b, c))
        || (d4 == 0.0 && within(a, b, d))
}

/// Edges `shared-p` and `shared-q` lie on one line and point the same way.
fn collinear_overlap(shared: [f64; 2], p: [f64; 2], q: [f64; 2]) -> bool {
    let u = [p[0] - shared[0], p[1] - shared[1]];
    let v = [q[0] - shared[0], q[1] - shared[1]];
    u[0] * v[1] - u[1] * v[0] == 0.0 && u[0] * v[0] + u[1] * v[1] > 0.0
}

/// Revolves `profile` a full turn about the z axis with `segments` facets.
/// Vertices on the axis collapse to a single mesh vertex.
pub fn revolve(profile: &Profile2D, segments: usize) -> Result<TriangleMesh, ProfileError> {
    if segments < 3 {
        return Err(ProfileError::TooFewSegments(segments));
    }
    let pts = profile.points();
    let n = pts.len();
    for i in 0..n {
        for j in i + 2..n {
            let wraps = i == 0 && j == n - 1;
            if !wraps && pts[i][0] == 0.0 && pts[j][0] == 0.0 {
                // Two non-consecutive axis points would pinch the surface.
                let between_on_axis = (i + 1..j).all(|k| pts[k][0] == 0.0)
                    || (j + 1..n).chain(0..i).all(|k| pts[k][0] == 0.0);
                if !between_on_axis {
                    return Err(ProfileError::SelfIntersecting(i, j));
                }
            }
        }
    }

    let angles: Vec<(f64, f64)> = (0..segments)
        .map(|k| {
            let t = TAU * k as f64 / segments as f64;
            (t.cos(), t.sin())
        })
        .collect();
    let mut mesh = TriangleMesh::default();
    // First vertex index of each profile point's ring (axis points: one vertex).
    let mut ring_start = Vec::with_capacity(n);
    for p in pts {
        ring_start.push(mesh.vertices.len() as u32);
        if p[0] == 0.0 {
            mesh.vertices.push([0.0, 0.0, p[1]]);
        } else {
            for &(c, s) in &angles {
                mesh.vertices.push([p[0] * c, p[0] * s, p[1]]);
            }
        }
    }
    let at = |i: usize, k: usize| -> u32 {
        if pts[i][0] == 0.0 {
            ring_start[i]
        } else {
            ring_start[i] + (k % segments) as u32
        }
    };
    for i in 0..n {
        let j = (i + 1) % n;
        let (a_axis, b_axis) = (pts[i][0] == 0.0, pts[j][0] == 0.0);
        if a_axis && b_axis {
            continue;
        }
        for k in 0..segments {
            let (a0, a1, b0, b1) = (at(i, k), at(i, k + 1), at(j, k), at(j, k + 1));
            if a_axis {
                mesh.triangles.push([a0, b1, b0]);
            } else if b_axis {
                mesh.triangles.push([a0, a1, b0]);
            } else {
                mesh.triangles.push([a0, a1, b1]);
                mesh.triangles.push([a0, b1, b0]);
            }
        }
    }
    if mesh.signed_volume() < 0.0 {
        mesh = mesh.reversed();
    }
    Ok(mesh)
}
