//! Planar cut of a closed mesh with a triangulated cap.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::mesh::{dot, sub, Point3, TriangleMesh};
use super::triangulate::{ring_area, triangulate, TriangulateError};

/// Plane through `pivot` whose normal leans from +z towards +x by
/// `tilt_deg`. The cut keeps the part below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltPlane {
    pub pivot: Point3,
    pub tilt_deg: f64,
}

impl TiltPlane {
    pub fn normal(&self) -> Point3 {
        let t = self.tilt_deg.to_radians();
        [t.sin(), 0.0, t.cos()]
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClipError {
    #[error("cutting plane leaves nothing of the mesh")]
    Empty,
    #[error("tilt angle must lie within [0, 90), got {0}")]
    Angle(f64),
    #[error("cut boundary is not a set of closed loops")]
    OpenBoundary,
    #[error("cut hole lies outside every cap ring")]
    OrphanHole,
    #[error(transparent)]
    Cap(#[from] TriangulateError),
}

/// Keeps the part of `mesh` below `plane` and closes the cut with a flat cap.
/// Vertices that would fall on the plane are avoided by nudging the plane
/// upward by a few millionths of the mesh size.
pub fn tilt_cut(mesh: &TriangleMesh, plane: TiltPlane) -> Result<TriangleMesh, ClipError> {
    if !(0.0..90.0).contains(&plane.tilt_deg) {
        return Err(ClipError::Angle(plane.tilt_deg));
    }
    let Some((lo, hi)) = mesh.bbox() else {
        return Err(ClipError::Empty);
    };
    let scale = super::mesh::norm(sub(hi, lo)).max(1e-12);
    let n = plane.normal();
    let mut offset = 0.0;
    let dist = loop {
        let d: Vec<f64> = mesh.vertices.iter().map(|&v| dot(n, sub(v, plane.pivot)) - offset).collect();
        if d.iter().all(|x| x.abs() >= 1e-6 * scale) {
            break d;
        }
        offset += 2e-6 * scale;
    };
    if dist.iter().all(|&d| d < 0.0) {
        return Ok(mesh.clone());
    }

    let mut out = TriangleMesh::default();
    let mut kept: Vec<u32> = vec![u32::MAX; mesh.vertices.len()];
    let mut cut: HashMap<(u32, u32), u32> = HashMap::new();
    let mut keep = |out: &mut TriangleMesh, i: u32| -> u32 {
        if kept[i as usize] == u32::MAX {
            kept[i as usize] = out.push_vertex(mesh.vertices[i as usize]);
        }
        kept[i as usize]
    };
    let mut crossing = |out: &mut TriangleMesh, a: u32, b: u32| -> u32 {
        let key = (a.min(b), a.max(b));
        *cut.entry(key).or_insert_with(|| {
            let (p, q) = (mesh.vertices[key.0 as usize], mesh.vertices[key.1 as usize]);
            let (dp, dq) = (dist[key.0 as usize], dist[key.1 as usize]);
            let t = dp / (dp - dq);
            out.push_vertex([0, 1, 2].map(|k| p[k] + t * (q[k] - p[k])))
        })
    };
    // Cap edges, already reversed so that the cap faces along the normal.
    let mut cap: BTreeMap<u32, u32> = BTreeMap::new();
    for &t in &mesh.triangles {
        let below = t.map(|i| dist[i as usize] < 0.0);
        match below.iter().filter(|b| **b).count() {
            3 => {
                let tri = t.map(|i| keep(&mut out, i));
                out.triangles.push(tri);
            }
            1 => {
                let k = below.iter().position(|b| *b).expect("one below");
                let (a, b, c) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
                let ka = keep(&mut out, a);
                let ab = crossing(&mut out, a, b);
                let ac = crossing(&mut out, a, c);
                out.triangles.push([ka, ab, ac]);
                cap.insert(ac, ab);
            }
            2 => {
                let k = below.iter().position(|b| !*b).expect("one above");
                let (a, b, c) = (t[(k + 1) % 3], t[(k + 2) % 3], t[k]);
                let (ka, kb) = (keep(&mut out, a), keep(&mut out, b));
                let bc = crossing(&mut out, b, c);
                let ca = crossing(&mut out, c, a);
                out.triangles.push([ka, kb, bc]);
                out.triangles.push([ka, bc, ca]);
                cap.insert(ca, bc);
            }
            _ => {}
        }
    }
    if out.triangles.is_empty() {
        return Err(ClipError::Empty);
    }

    let mut loops: Vec<Vec<u32>> = Vec::new();
    while let Some((&first, _)) = cap.iter().next() {
        let mut ring = vec![first];
        let mut cur = cap.remove(&first).expect("present");
        while cur != first {
            ring.push(cur);
            cur = cap.remove(&cur).ok_or(ClipError::OpenBoundary)?;
        }
        loops.push(ring);
    }
    let u = [n[2], 0.0, -n[0]];
    let v = [0.0, 1.0, 0.0];
    let flat: Vec<[f64; 2]> = out.vertices.iter().map(|&p| [dot(p, u), dot(p, v)]).collect();
    let as_local = |ring: &[u32]| ring.iter().map(|&i| i as usize).collect::<Vec<usize>>();
    let mut outers: Vec<(Vec<usize>, f64, Vec<Vec<usize>>)> = Vec::new();
    let mut holes: Vec<Vec<usize>> = Vec::new();
    for ring in &loops {
        let local = as_local(ring);
        let area = ring_area(&flat, &local);
        if area > 0.0 {
            outers.push((local, area, Vec::new()));
        } else {
            holes.push(local);
        }
    }
    for hole in holes {
        let probe = flat[hole[0]];
        let home = outers
            .iter_mut()
            .filter(|(ring, _, _)| contains(&flat, ring, probe))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(ClipError::OrphanHole)?;
        home.2.push(hole);
    }
    for (ring, _, holes) in &outers {
        for tri in triangulate(&flat, ring, holes)? {
            out.triangles.push(tri.map(|i| i as u32));
        }
    }
    Ok(out)
}

fn contains(points: &[[f64; 2]], ring: &[usize], p: [f64; 2]) -> bool {
    let mut inside = false;
    let n = ring.len();
    for k in 0..n {
        let a = points[ring[k]];
        let b = points[ring[(k + 1) % n]];
        if (a[1] > p[1]) != (b[1] > p[1]) && p[0] < a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]) {
            inside = !inside;
        }
    }
    inside
}
