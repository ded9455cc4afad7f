//! Binary STL and OBJ encodings.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::mesh::{cross, sub, Point3, TriangleMesh};

pub const STL_HEADER: &[u8] = b"binary STL, millimeters";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StlError {
    #[error("{0} triangles exceed the STL count field")]
    TooManyTriangles(usize),
    #[error("STL needs at least 84 bytes, got {0}")]
    TooShort(usize),
    #[error("STL declares {triangles} triangles ({expected} bytes) but has {actual} bytes")]
    Length {
        triangles: u32,
        expected: usize,
        actual: usize,
    },
    #[error("STL triangle {0} has a non-finite coordinate")]
    NonFinite(usize),
}

fn to_f32(p: Point3) -> [f32; 3] {
    p.map(|c| c as f32)
}

/// Unit normal of the single-precision triangle, or zero when degenerate.
fn stored_normal(v: [[f32; 3]; 3]) -> [f32; 3] {
    let w = v.map(|p| p.map(f64::from));
    let n = cross(sub(w[1], w[0]), sub(w[2], w[0]));
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if len > 0.0 {
        n.map(|c| (c / len) as f32)
    } else {
        [0.0; 3]
    }
}

pub fn export_stl(mesh: &TriangleMesh) -> Result<Vec<u8>, StlError> {
    let count = u32::try_from(mesh.triangles.len()).map_err(|_| StlError::TooManyTriangles(mesh.triangles.len()))?;
    let mut out = Vec::with_capacity(84 + 50 * mesh.triangles.len());
    let mut header = [0u8; 80];
    header[..STL_HEADER.len()].copy_from_slice(STL_HEADER);
    out.extend_from_slice(&header);
    out.extend_from_slice(&count.to_le_bytes());
    for &t in &mesh.triangles {
        let v = mesh.corners(t).map(to_f32);
        for c in stored_normal(v).into_iter().chain(v.into_iter().flatten()) {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    Ok(out)
}

/// Parses binary STL, merging corners with bit-identical coordinates into
/// shared vertices in order of first appearance.
pub fn parse_stl(bytes: &[u8]) -> Result<TriangleMesh, StlError> {
    if bytes.len() < 84 {
        return Err(StlError::TooShort(bytes.len()));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().expect("4 bytes"));
    let expected = 84 + 50 * count as usize;
    if bytes.len() != expected {
        return Err(StlError::Length {
            triangles: count,
            expected,
            actual: bytes.len(),
        });
    }
    let mut mesh = TriangleMesh::default();
    let mut index: HashMap<[u32; 3], u32> = HashMap::new();
    for (k, record) in bytes[84..].chunks_exact(50).enumerate() {
        let f = |i: usize| f32::from_le_bytes(record[4 * i..4 * i + 4].try_into().expect("4 bytes"));
        let mut tri = [0u32; 3];
        for (corner, slot) in tri.iter_mut().enumerate() {
            let p = [f(3 + 3 * corner), f(4 + 3 * corner), f(5 + 3 * corner)];
            if !p.iter().all(|c| c.is_finite()) {
                return Err(StlError::NonFinite(k));
            }
            let key = p.map(f32::to_bits);
            *slot = *index
                .entry(key)
                .or_insert_with(|| mesh.push_vertex(p.map(f64::from)));
        }
        mesh.triangles.push(tri);
    }
    Ok(mesh)
}

/// ASCII Wavefront OBJ: vertices, then 1-based faces.
pub fn export_obj(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", v[0], v[1], v[2]);
    }
    for t in &mesh.triangles {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}
