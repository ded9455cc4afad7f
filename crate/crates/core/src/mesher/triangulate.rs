//! Ear-clipping triangulation of planar polygons with holes.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TriangulateError {
    #[error("polygon ring has fewer than 3 vertices")]
    TooFewVertices,
    #[error("hole could not be bridged to its outer ring")]
    Bridge,
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

pub(crate) fn ring_area(points: &[[f64; 2]], ring: &[usize]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|k| {
            let a = points[ring[k]];
            let b = points[ring[(k + 1) % n]];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        * 0.5
}

/// Triangulates the region inside `outer` and outside every ring of
/// `holes`. Rings index into `points`; their winding is normalized here.
/// Returned triangles are counter-clockwise.
pub fn triangulate(points: &[[f64; 2]], outer: &[usize], holes: &[Vec<usize>]) -> Result<Vec<[usize; 3]>, TriangulateError> {
    if outer.len() < 3 || holes.iter().any(|h| h.len() < 3) {
        return Err(TriangulateError::TooFewVertices);
    }
    let mut poly = outer.to_vec();
    if ring_area(points, &poly) < 0.0 {
        poly.reverse();
    }
    let mut holes: Vec<Vec<usize>> = holes
        .iter()
        .map(|h| {
            let mut h = h.clone();
            if ring_area(points, &h) > 0.0 {
                h.reverse();
            }
            h
        })
        .collect();
    let max_x = |h: &Vec<usize>| h.iter().map(|&i| points[i][0]).fold(f64::NEG_INFINITY, f64::max);
    holes.sort_by(|a, b| max_x(b).total_cmp(&max_x(a)));
    for hole in &holes {
        bridge(points, &mut poly, hole)?;
    }
    Ok(clip_ears(points, poly))
}

/// Splices `hole` into `poly` through a mutually visible vertex pair.
fn bridge(points: &[[f64; 2]], poly: &mut Vec<usize>, hole: &[usize]) -> Result<(), TriangulateError> {
    let (hk, &m_idx) = hole
        .iter()
        .enumerate()
        .max_by(|a, b| points[*a.1][0].total_cmp(&points[*b.1][0]).then(points[*b.1][1].total_cmp(&points[*a.1][1])))
        .expect("non-empty hole");
    let m = points[m_idx];
    let n = poly.len();

    // Nearest edge hit by the ray from M towards +x.
    let mut best: Option<(f64, usize)> = None;
    for k in 0..n {
        let a = points[poly[k]];
        let b = points[poly[(k + 1) % n]];
        let crosses = (a[1] <= m[1] && m[1] < b[1]) || (b[1] <= m[1] && m[1] < a[1]);
        if !crosses {
            continue;
        }
        let t = (m[1] - a[1]) / (b[1] - a[1]);
        let x = a[0] + t * (b[0] - a[0]);
        if x >= m[0] && best.is_none_or(|(bx, _)| x < bx) {
            best = Some((x, k));
        }
    }
    let (hit_x, edge) = best.ok_or(TriangulateError::Bridge)?;
    let hit = [hit_x, m[1]];
    let (ea, eb) = (edge, (edge + 1) % n);
    let mut p_pos = if points[poly[ea]][0] >= points[poly[eb]][0] { ea } else { eb };
    let p = points[poly[p_pos]];
    if hit != p {
        // Reflex vertices inside triangle M-hit-P can block the view; take
        // the one closest in angle to the ray.
        let tri = if cross(m, hit, p) >= 0.0 { [m, hit, p] } else { [m, p, hit] };
        let mut best_angle = f64::INFINITY;
        for k in 0..n {
            if k == p_pos {
                continue;
            }
            let q = points[poly[k]];
            let prev = points[poly[(k + n - 1) % n]];
            let next = points[poly[(k + 1) % n]];
            if cross(prev, q, next) > 0.0 || !in_triangle(q, tri) {
                continue;
            }
            let angle = (q[1] - m[1]).abs().atan2(q[0] - m[0]);
            if angle < best_angle {
                best_angle = angle;
                p_pos = k;
            }
        }
    }
    // A bridged vertex may occur twice; splice into the copy whose wedge
    // faces M.
    let target = poly[p_pos];
    let candidates: Vec<usize> = (0..n).filter(|&k| poly[k] == target).collect();
    if candidates.len() > 1 {
        for &k in &candidates {
            let prev = points[poly[(k + n - 1) % n]];
            let next = points[poly[(k + 1) % n]];
            if in_wedge(prev, points[target], next, m) {
                p_pos = k;
                break;
            }
        }
    }
    let mut spliced = Vec::with_capacity(n + hole.len() + 2);
    spliced.extend_from_slice(&poly[..=p_pos]);
    for j in 0..=hole.len() {
        spliced.push(hole[(hk + j) % hole.len()]);
    }
    spliced.extend_from_slice(&poly[p_pos..]);
    *poly = spliced;
    Ok(())
}

/// `q` lies strictly inside the interior angle at `v` of a CCW polygon.
fn in_wedge(prev: [f64; 2], v: [f64; 2], next: [f64; 2], q: [f64; 2]) -> bool {
    let convex = cross(prev, v, next) >= 0.0;
    let left_of_in = cross(prev, v, q) > 0.0;
    let left_of_out = cross(v, next, q) > 0.0;
    if convex {
        left_of_in && left_of_out
    } else {
        left_of_in || left_of_out
    }
}

fn in_triangle(q: [f64; 2], t: [[f64; 2]; 3]) -> bool {
    cross(t[0], t[1], q) >= 0.0 && cross(t[1], t[2], q) >= 0.0 && cross(t[2], t[0], q) >= 0.0
}

fn clip_ears(points: &[[f64; 2]], mut poly: Vec<usize>) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(poly.len().saturating_sub(2));
    let scale = poly
        .iter()
        .map(|&i| points[i][0].abs().max(points[i][1].abs()))
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let eps = 1e-14 * scale * scale;
    let mut start = 0;
    while poly.len() > 3 {
        let n = poly.len();
        let mut chosen = None;
        for step in 0..n {
            let k = (start + step) % n;
            if is_ear(points, &poly, k, eps) {
                chosen = Some(k);
                break;
            }
        }
        let k = chosen.unwrap_or_else(|| {
            (0..n)
                .max_by(|&a, &b| corner(points, &poly, a).total_cmp(&corner(points, &poly, b)))
                .expect("non-empty")
        });
        let prev = poly[(k + n - 1) % n];
        let next = poly[(k + 1) % n];
        out.push([prev, poly[k], next]);
        poly.remove(k);
        start = if k == 0 { 0 } else { k - 1 };
    }
    out.push([poly[0], poly[1], poly[2]]);
    out
}

fn corner(points: &[[f64; 2]], poly: &[usize], k: usize) -> f64 {
    let n = poly.len();
    cross(points[poly[(k + n - 1) % n]], points[poly[k]], points[poly[(k + 1) % n]])
}

fn is_ear(points: &[[f64; 2]], poly: &[usize], k: usize, eps: f64) -> bool {
    let n = poly.len();
    let (ia, ib, ic) = (poly[(k + n - 1) % n], poly[k], poly[(k + 1) % n]);
    let t = [points[ia], points[ib], points[ic]];
    if cross(t[0], t[1], t[2]) <= eps {
        return false;
    }
    poly.iter().all(|&j| {
        if j == ia || j == ib || j == ic {
            return true;
        }
        let q = points[j];
        if q == t[0] || q == t[1] || q == t[2] {
            return true;
        }
        !in_triangle(q, t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area_of(points: &[[f64; 2]], tris: &[[usize; 3]]) -> f64 {
        tris.iter().map(|t| 0.5 * cross(points[t[0]], points[t[1]], points[t[2]])).sum()
    }

    #[test]
    fn square_with_square_hole() {
        let pts = vec![
            [0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0],
            [3.0, 3.0], [3.0, 7.0], [7.0, 7.0], [7.0, 3.0],
        ];
        let tris = triangulate(&pts, &[0, 1, 2, 3], &[vec![4, 5, 6, 7]]).unwrap();
        assert_eq!(tris.len(), 8);
        assert!(tris.iter().all(|t| cross(pts[t[0]], pts[t[1]], pts[t[2]]) > 0.0));
        assert!((area_of(&pts, &tris) - 84.0).abs() < 1e-12);
    }

    #[test]
    fn concave_comb() {
        let pts = vec![[0.0, 0.0], [6.0, 0.0], [6.0, 4.0], [5.0, 4.0], [5.0, 1.0], [4.0, 1.0], [4.0, 4.0], [2.0, 4.0], [2.0, 1.0], [1.0, 1.0], [1.0, 4.0], [0.0, 4.0]];
        let ring: Vec<usize> = (0..pts.len()).rev().collect();
        let tris = triangulate(&pts, &ring, &[]).unwrap();
        assert_eq!(tris.len(), pts.len() - 2);
        assert!(tris.iter().all(|t| cross(pts[t[0]], pts[t[1]], pts[t[2]]) > 0.0));
        assert!((area_of(&pts, &tris) - (24.0 - 3.0 - 3.0)).abs() < 1e-12);
    }

    #[test]
    fn disc_with_two_holes() {
        let mut pts = Vec::new();
        let circle = |pts: &mut Vec<[f64; 2]>, cx: f64, r: f64, n: usize| -> Vec<usize> {
            (0..n)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / n as f64;
                    pts.push([cx + r * t.cos(), r * t.sin()]);
                    pts.len() - 1
                })
                .collect()
        };
        let outer = circle(&mut pts, 0.0, 10.0, 64);
        let h1 = circle(&mut pts, -4.0, 2.0, 12);
        let h2 = circle(&mut pts, 4.0, 2.0, 12);
        let expected = ring_area(&pts, &outer) - ring_area(&pts, &h1) - ring_area(&pts, &h2);
        let tris = triangulate(&pts, &outer, &[h1, h2]).unwrap();
        assert_eq!(tris.len(), 64 + 24 + 2 * 2 - 2);
        assert!(tris.iter().all(|t| cross(pts[t[0]], pts[t[1]], pts[t[2]]) > 0.0));
        assert!((area_of(&pts, &tris) - expected).abs() < 1e-9);
    }
}
