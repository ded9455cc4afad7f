//! Radial through-wall holes in a hollow cylindrical shell.
//!
//! The wall is rebuilt on a structured `(theta, z)` grid whose breaklines
//! frame a square patch around every hole. Each patch is stitched to a
//! polygonal hole loop and the loops on both wall faces are joined by a
//! tunnel, so every hole adds exactly one handle.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use super::mesh::{Point3, TriangleMesh};
use super::pie::push_oriented;
use super::revolve::{revolve, Profile2D, ProfileError};

/// Vertices on each hole loop.
pub const HOLE_SEGMENTS: usize = 16;
/// Patch half-size in hole radii, when neighbours allow it.
const PATCH_MARGIN: f64 = 1.125;
/// Closest allowed hole spacing, in hole radii, measured as the larger of
/// the arc and height separations on the inner wall.
const MIN_CLEARANCE: f64 = 2.2;
const SNAP: f64 = 1e-9;

/// Closed-bottom hollow cylinder. The interior floor sits at `z = 0`, the
/// base below it and the rim at `z = depth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CupShell {
    pub outer_radius: f64,
    pub wall: f64,
    pub base: f64,
    pub depth: f64,
    pub segments: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PerforateError {
    #[error("holes {first} and {second} overlap")]
    OverlappingHoles { first: usize, second: usize },
    #[error("hole {index} is not centered on the wall")]
    OffWall { index: usize },
    #[error("hole radius {0} does not fit the shell")]
    Radius(f64),
    #[error("shell dimensions are invalid")]
    Shell,
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

impl CupShell {
    pub fn inner_radius(&self) -> f64 {
        self.outer_radius - self.wall
    }

    pub fn profile(&self) -> Result<Profile2D, PerforateError> {
        let valid = [self.outer_radius, self.wall, self.base, self.depth]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite())
            && self.wall < self.outer_radius;
        if !valid {
            return Err(PerforateError::Shell);
        }
        let (r, ri) = (self.outer_radius, self.inner_radius());
        Ok(Profile2D::new(vec![
            [0.0, -self.base],
            [r, -self.base],
            [r, self.depth],
            [ri, self.depth],
            [ri, 0.0],
            [0.0, 0.0],
        ])?)
    }

    pub fn mesh(&self) -> Result<TriangleMesh, PerforateError> {
        Ok(revolve(&self.profile()?, self.segments)?)
    }

    /// Volume of the cavity, measured on the faceted inner wall.
    pub fn cavity_volume(&self) -> f64 {
        let n = self.segments as f64;
        0.5 * n * self.inner_radius().powi(2) * (TAU / n).sin() * self.depth
    }
}

fn wrap_pi(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

fn wrap_tau(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn sorted_breaks(mut v: Vec<f64>, period: Option<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < SNAP);
    if let Some(p) = period {
        if v.len() > 1 && p - v[v.len() - 1] < SNAP {
            v.pop();
        }
    }
    v
}

fn locate(breaks: &[f64], x: f64, period: Option<f64>) -> usize {
    let dist = |b: f64| match period {
        Some(_) => wrap_pi(b - x).abs(),
        None => (b - x).abs(),
    };
    let i = breaks.partition_point(|b| *b < x);
    let candidates = [i.saturating_sub(1), i.min(breaks.len() - 1), 0, breaks.len() - 1];
    let best = candidates
        .into_iter()
        .min_by(|a, b| dist(breaks[*a]).total_cmp(&dist(breaks[*b])))
        .expect("non-empty");
    debug_assert!(dist(breaks[best]) < 1e-6);
    best
}

struct Hole {
    theta: f64,
    z: f64,
    cols: (usize, usize),
    rows: (usize, usize),
}

struct Grid<'a> {
    mesh: TriangleMesh,
    thetas: &'a [f64],
    /// Outer wall heights: the base bottom followed by `zs`.
    outer_z: Vec<f64>,
    zs: &'a [f64],
    outer_ids: Vec<u32>,
    inner_ids: Vec<u32>,
    ro: f64,
    ri: f64,
}

impl Grid<'_> {
    fn outer(&mut self, i: usize, j: usize) -> u32 {
        let i = i % self.thetas.len();
        let slot = j * self.thetas.len() + i;
        if self.outer_ids[slot] == u32::MAX {
            let t = self.thetas[i];
            self.outer_ids[slot] = self.mesh.push_vertex([self.ro * t.cos(), self.ro * t.sin(), self.outer_z[j]]);
        }
        self.outer_ids[slot]
    }

    fn inner(&mut self, i: usize, j: usize) -> u32 {
        let i = i % self.thetas.len();
        let slot = j * self.thetas.len() + i;
        if self.inner_ids[slot] == u32::MAX {
            let t = self.thetas[i];
            self.inner_ids[slot] = self.mesh.push_vertex([self.ri * t.cos(), self.ri * t.sin(), self.zs[j]]);
        }
        self.inner_ids[slot]
    }

    fn quad(&mut self, q: [u32; 4], outward: impl Fn(Point3) -> Point3) {
        for t in [[q[0], q[1], q[2]], [q[0], q[2], q[3]]] {
            let c = centroid(self.mesh.corners(t));
            push_oriented(&mut self.mesh, t, outward(c));
        }
    }
}

fn centroid(p: [Point3; 3]) -> Point3 {
    [0, 1, 2].map(|k| (p[0][k] + p[1][k] + p[2][k]) / 3.0)
}

fn radial_out(c: Point3) -> Point3 {
    [c[0], c[1], 0.0]
}

fn radial_in(c: Point3) -> Point3 {
    [-c[0], -c[1], 0.0]
}

/// Cuts a radial hole of `radius` through the shell wall at each center.
/// Centers may lie anywhere within the wall thickness; only their angle and
/// height matter. With no centers the plain shell is returned.
pub fn perforate(shell: &CupShell, centers: &[Point3], radius: f64) -> Result<TriangleMesh, PerforateError> {
    let plain = shell.mesh()?;
    if centers.is_empty() {
        return Ok(plain);
    }
    let (ro, ri) = (shell.outer_radius, shell.inner_radius());
    if !(radius > 0.0 && radius.is_finite()) || PATCH_MARGIN * radius >= 0.25 * ri {
        return Err(PerforateError::Radius(radius));
    }
    let mut raw = Vec::with_capacity(centers.len());
    for (index, c) in centers.iter().enumerate() {
        let rho = c[0].hypot(c[1]);
        if !c.iter().all(|v| v.is_finite()) || (rho - ro).abs() > shell.wall {
            return Err(PerforateError::OffWall { index });
        }
        raw.push((wrap_tau(c[1].atan2(c[0])), c[2]));
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            let gap = (ri * wrap_pi(raw[i].0 - raw[j].0).abs()).max((raw[i].1 - raw[j].1).abs());
            if gap < MIN_CLEARANCE * radius {
                return Err(PerforateError::OverlappingHoles { first: i, second: j });
            }
            min_gap = min_gap.min(gap);
        }
    }
    let half = (PATCH_MARGIN * radius).min(0.4995 * min_gap);
    for (index, &(_, z)) in raw.iter().enumerate() {
        if z - half <= 1e-6 || z + half >= shell.depth - 1e-6 {
            return Err(PerforateError::OffWall { index });
        }
    }
    let half_angle = half / ri;

    let n = shell.segments;
    let mut thetas: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let mut zs = vec![0.0, shell.depth];
    for &(t, z) in &raw {
        thetas.extend([wrap_tau(t - half_angle), wrap_tau(t + half_angle)]);
        zs.extend([z - half, z + half]);
    }
    let thetas = sorted_breaks(thetas, Some(TAU));
    let zs = sorted_breaks(zs, None);
    let (nt, nz) = (thetas.len(), zs.len());

    let holes: Vec<Hole> = raw
        .iter()
        .map(|&(theta, z)| Hole {
            theta,
            z,
            cols: (
                locate(&thetas, wrap_tau(theta - half_angle), Some(TAU)),
                locate(&thetas, wrap_tau(theta + half_angle), Some(TAU)),
            ),
            rows: (locate(&zs, z - half, None), locate(&zs, z + half, None)),
        })
        .collect();
    let mut blocked = vec![false; nt * (nz - 1)];
    for h in &holes {
        let width = (h.cols.1 + nt - h.cols.0) % nt;
        for k in 0..width {
            for j in h.rows.0..h.rows.1 {
                blocked[j * nt + (h.cols.0 + k) % nt] = true;
            }
        }
    }

    let mut outer_z = vec![-shell.base];
    outer_z.extend_from_slice(&zs);
    let mut g = Grid {
        mesh: TriangleMesh::default(),
        thetas: &thetas,
        outer_z,
        zs: &zs,
        outer_ids: vec![u32::MAX; nt * (nz + 1)],
        inner_ids: vec![u32::MAX; nt * nz],
        ro,
        ri,
    };
    let bottom = g.mesh.push_vertex([0.0, 0.0, -shell.base]);
    let floor = g.mesh.push_vertex([0.0, 0.0, 0.0]);
    for i in 0..nt {
        let t = [bottom, g.outer(i + 1, 0), g.outer(i, 0)];
        push_oriented(&mut g.mesh, t, [0.0, 0.0, -1.0]);
    }
    for j in 0..nz {
        for i in 0..nt {
            if j > 0 && blocked[(j - 1) * nt + i] {
                continue;
            }
            let q = [g.outer(i, j), g.outer(i + 1, j), g.outer(i + 1, j + 1), g.outer(i, j + 1)];
            g.quad(q, radial_out);
        }
    }
    for i in 0..nt {
        let q = [g.outer(i, nz), g.outer(i + 1, nz), g.inner(i + 1, nz - 1), g.inner(i, nz - 1)];
        g.quad(q, |_| [0.0, 0.0, 1.0]);
    }
    for j in 0..nz - 1 {
        for i in 0..nt {
            if blocked[j * nt + i] {
                continue;
            }
            let q = [g.inner(i, j), g.inner(i + 1, j), g.inner(i + 1, j + 1), g.inner(i, j + 1)];
            g.quad(q, radial_in);
        }
    }
    for i in 0..nt {
        let t = [floor, g.inner(i, 0), g.inner(i + 1, 0)];
        push_oriented(&mut g.mesh, t, [0.0, 0.0, 1.0]);
    }

    for h in &holes {
        let outer_loop = hole_loop(&mut g.mesh, h, radius, ro);
        let inner_loop = hole_loop(&mut g.mesh, h, radius, ri);
        let outer_ring = patch_ring(&mut g, h, true);
        let inner_ring = patch_ring(&mut g, h, false);
        zip(&mut g.mesh, &outer_ring, &outer_loop, radial_out);
        zip(&mut g.mesh, &inner_ring, &inner_loop, radial_in);
        let axis = [h.theta.cos(), h.theta.sin(), 0.0];
        let toward_axis = |c: Point3| {
            let s = c[0] * axis[0] + c[1] * axis[1];
            [s * axis[0] - c[0], s * axis[1] - c[1], h.z - c[2]]
        };
        for m in 0..HOLE_SEGMENTS {
            let next = (m + 1) % HOLE_SEGMENTS;
            let q = [outer_loop[m].0, outer_loop[next].0, inner_loop[next].0, inner_loop[m].0];
            g.quad(q, toward_axis);
        }
    }
    Ok(g.mesh)
}

/// A loop vertex with its patch-local coordinates (arc offset, height offset).
type LoopVertex = (u32, [f64; 2]);

fn hole_loop(mesh: &mut TriangleMesh, h: &Hole, radius: f64, wall_radius: f64) -> Vec<LoopVertex> {
    (0..HOLE_SEGMENTS)
        .map(|m| {
            let a = TAU * m as f64 / HOLE_SEGMENTS as f64;
            let (u, v) = (radius * a.cos(), radius * a.sin());
            let offset = (u / wall_radius).asin();
            let t = h.theta + offset;
            let id = mesh.push_vertex([wall_radius * t.cos(), wall_radius * t.sin(), h.z + v]);
            (id, [wall_radius * offset, v])
        })
        .collect()
}

/// Grid vertices around a hole patch, counter-clockwise in `(theta, z)`.
fn patch_ring(g: &mut Grid<'_>, h: &Hole, outer: bool) -> Vec<LoopVertex> {
    let nt = g.thetas.len();
    let width = (h.cols.1 + nt - h.cols.0) % nt;
    let (c0, (r0, r1)) = (h.cols.0, h.rows);
    let mut cells: Vec<(usize, usize)> = Vec::new();
    cells.extend((0..width).map(|k| (c0 + k, r0)));
    cells.extend((r0..r1).map(|j| (c0 + width, j)));
    cells.extend((1..=width).rev().map(|k| (c0 + k, r1)));
    cells.extend((r0 + 1..=r1).rev().map(|j| (c0, j)));
    let scale = if outer { g.ro } else { g.ri };
    cells
        .into_iter()
        .map(|(i, j)| {
            let id = if outer { g.outer(i, j + 1) } else { g.inner(i, j) };
            let local = [scale * wrap_pi(g.thetas[i % nt] - h.theta), g.zs[j] - h.z];
            (id, local)
        })
        .collect()
}

/// Triangulates the annulus between two counter-clockwise loops around the
/// origin of their local coordinates. Both loops are walked in angular
/// order; at each step the advance that keeps the new triangle
/// counter-clockwise wins, with the smaller next angle breaking ties.
fn zip(mesh: &mut TriangleMesh, outer: &[LoopVertex], inner: &[LoopVertex], outward: fn(Point3) -> Point3) {
    let angle = |p: [f64; 2]| p[1].atan2(p[0]);
    let o_start = (0..outer.len())
        .min_by(|a, b| angle(outer[*a].1).total_cmp(&angle(outer[*b].1)))
        .expect("non-empty");
    let anchor = outer[o_start].1;
    let h_start = (0..inner.len())
        .min_by(|a, b| dist2(inner[*a].1, anchor).total_cmp(&dist2(inner[*b].1, anchor)))
        .expect("non-empty");
    let o = unwrapped(outer, o_start, angle(anchor));
    let h = unwrapped(inner, h_start, angle(anchor));
    let ccw = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) > 0.0;
    let (mut i, mut j) = (0, 0);
    while i + 1 < o.len() || j + 1 < h.len() {
        let ring_ok = i + 1 < o.len() && ccw(o[i].1, o[i + 1].1, h[j].1);
        let hole_ok = j + 1 < h.len() && ccw(o[i].1, h[j + 1].1, h[j].1);
        let advance_ring = match (ring_ok, hole_ok) {
            (true, false) => true,
            (false, true) => false,
            _ => {
                let next_o = o.get(i + 1).map_or(f64::INFINITY, |v| v.2);
                let next_h = h.get(j + 1).map_or(f64::INFINITY, |v| v.2);
                next_o <= next_h
            }
        };
        let t = if advance_ring {
            i += 1;
            [o[i - 1].0, o[i].0, h[j].0]
        } else {
            j += 1;
            [o[i].0, h[j].0, h[j - 1].0]
        };
        let c = centroid(mesh.corners(t));
        push_oriented(mesh, t, outward(c));
    }
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// The loop from `start` back to itself with monotone angles, the first
/// within half a turn of `reference`.
fn unwrapped(ring: &[LoopVertex], start: usize, reference: f64) -> Vec<(u32, [f64; 2], f64)> {
    let mut out: Vec<(u32, [f64; 2], f64)> = Vec::with_capacity(ring.len() + 1);
    for k in 0..=ring.len() {
        let (id, p) = ring[(start + k) % ring.len()];
        let mut a = p[1].atan2(p[0]);
        match out.last() {
            None => a = reference + wrap_pi(a - reference),
            Some(prev) => {
                while a < prev.2 {
                    a += TAU;
                }
            }
        }
        if k == ring.len() {
            a = out[0].2 + TAU;
        }
        out.push((id, p, a));
    }
    out
}
