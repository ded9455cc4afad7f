//! Indexed triangle meshes and their topology/volume diagnostics.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub type Point3 = [f64; 3];

/// Indexed triangle set in millimeters, counter-clockwise seen from outside.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<Point3>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Point3>, triangles: Vec<[u32; 3]>) -> Self {
        Self { vertices, triangles }
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn push_vertex(&mut self, p: Point3) -> u32 {
        self.vertices.push(p);
        (self.vertices.len() - 1) as u32
    }

    pub fn corners(&self, t: [u32; 3]) -> [Point3; 3] {
        t.map(|i| self.vertices[i as usize])
    }

    /// Volume by the divergence theorem; positive for outward winding.
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&t| {
                let [a, b, c] = self.corners(t);
                dot(a, cross(b, c))
            })
            .sum::<f64>()
            / 6.0
    }

    pub fn translated(mut self, offset: Point3) -> Self {
        for v in &mut self.vertices {
            for k in 0..3 {
                v[k] += offset[k];
            }
        }
        self
    }

    /// Flips every triangle.
    pub fn reversed(mut self) -> Self {
        for t in &mut self.triangles {
            t.swap(1, 2);
        }
        self
    }

    pub fn bbox(&self) -> Option<(Point3, Point3)> {
        let first = *self.vertices.first()?;
        let mut lo = first;
        let mut hi = first;
        for v in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        Some((lo, hi))
    }

    /// Drops vertices that no triangle references, keeping order.
    pub fn compacted(self) -> Self {
        let mut remap = vec![u32::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        let mut triangles = Vec::with_capacity(self.triangles.len());
        for t in &self.triangles {
            let mut out = [0u32; 3];
            for k in 0..3 {
                let old = t[k] as usize;
                if remap[old] == u32::MAX {
                    remap[old] = vertices.len() as u32;
                    vertices.push(self.vertices[old]);
                }
                out[k] = remap[old];
            }
            triangles.push(out);
        }
        Self { vertices, triangles }
    }
}

pub(crate) fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: Point3, b: Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: Point3) -> f64 {
    dot(a, a).sqrt()
}

/// Unnormalized face normal, twice the triangle area in length.
pub(crate) fn face_normal(p: [Point3; 3]) -> Point3 {
    cross(sub(p[1], p[0]), sub(p[2], p[0]))
}

/// Diagnostics for a mesh; always computable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub components: usize,
    /// Defined only for watertight meshes.
    pub genus: Option<i64>,
    pub watertight: bool,
    pub degenerate_triangles: usize,
    pub signed_volume_mm3: f64,
    /// Shortest inward ray hit over sampled faces.
    pub min_wall_estimate: Option<f64>,
}

const WALL_SAMPLES: usize = 64;

pub fn mesh_stats(mesh: &TriangleMesh) -> MeshStats {
    let mut directed: HashMap<(u32, u32), u32> = HashMap::with_capacity(mesh.triangles.len() * 3);
    for t in &mesh.triangles {
        for k in 0..3 {
            *directed.entry((t[k], t[(k + 1) % 3])).or_insert(0) += 1;
        }
    }
    let mut edges = 0usize;
    let mut watertight = !mesh.triangles.is_empty();
    for (&(a, b), &count) in &directed {
        let back = directed.get(&(b, a)).copied().unwrap_or(0);
        if a < b || back == 0 {
            edges += 1;
        }
        if count != 1 || back != 1 {
            watertight = false;
        }
    }

    let mut used = vec![false; mesh.vertices.len()];
    for t in &mesh.triangles {
        for &i in t {
            used[i as usize] = true;
        }
    }
    let vertices = used.iter().filter(|u| **u).count();
    let faces = mesh.triangles.len();
    let euler = vertices as i64 - edges as i64 + faces as i64;
    let components = count_components(mesh, &used);
    let genus = watertight.then(|| (2 * components as i64 - euler) / 2);

    let scale = mesh
        .bbox()
        .map_or(1.0, |(lo, hi)| norm(sub(hi, lo)).max(f64::MIN_POSITIVE));
    let degenerate_triangles = mesh
        .triangles
        .iter()
        .filter(|&&t| norm(face_normal(mesh.corners(t))) <= 1e-12 * scale * scale)
        .count();

    MeshStats {
        vertices,
        edges,
        faces,
        euler,
        components,
        genus,
        watertight,
        degenerate_triangles,
        signed_volume_mm3: mesh.signed_volume(),
        min_wall_estimate: min_wall_estimate(mesh),
    }
}

fn count_components(mesh: &TriangleMesh, used: &[bool]) -> usize {
    let mut parent: Vec<usize> = (0..mesh.vertices.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for t in &mesh.triangles {
        let a = find(&mut parent, t[0] as usize);
        for &v in &t[1..] {
            let b = find(&mut parent, v as usize);
            if a != b {
                parent[b] = a;
            }
        }
    }
    (0..mesh.vertices.len())
        .filter(|&i| used[i] && find(&mut parent, i) == i)
        .count()
}

/// Casts a ray against the inward side of sampled faces and keeps the
/// nearest hit, a proxy for the thinnest wall.
fn min_wall_estimate(mesh: &TriangleMesh) -> Option<f64> {
    let n = mesh.triangles.len();
    if n < 2 {
        return None;
    }
    let stride = (n / WALL_SAMPLES).max(1);
    let mut best: Option<f64> = None;
    for (idx, &t) in mesh.triangles.iter().enumerate().step_by(stride) {
        let p = mesh.corners(t);
        let normal = face_normal(p);
        let len = norm(normal);
        if len == 0.0 {
            continue;
        }
        let dir = normal.map(|c| -c / len);
        let origin = [
            (p[0][0] + p[1][0] + p[2][0]) / 3.0,
            (p[0][1] + p[1][1] + p[2][1]) / 3.0,
            (p[0][2] + p[1][2] + p[2][2]) / 3.0,
        ];
        for (j, &other) in mesh.triangles.iter().enumerate() {
            if j == idx {
                continue;
            }
            if let Some(d) = ray_triangle(origin, dir, mesh.corners(other)) {
                if d > 1e-9 && best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
    }
    best
}

/// Möller–Trumbore intersection distance along `dir`.
fn ray_triangle(origin: Point3, dir: Point3, tri: [Point3; 3]) -> Option<f64> {
    let e1 = sub(tri[1], tri[0]);
    let e2 = sub(tri[2], tri[0]);
    let p = cross(dir, e2);
    let det = dot(e1, p);
    if det.abs() < 1e-14 {
        return None;
    }
    let inv = 1.0 / det;
    let s = sub(origin, tri[0]);
    let u = dot(s, p) * inv;
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let q = cross(s, e1);
    let v = dot(dir, q) * inv;
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    Some(dot(e2, q) * inv)
}
