//! Marching-squares iso-contours over cell-center samples.
//!
//! The traced region is the strict superlevel set `{z > level}`. The grid is
//! padded with a virtual ring of samples that sit below every level, so any
//! contour leaving the data extent is closed along the outermost cell
//! centers. Nodata samples are treated the same way as the padding.
//!
//! Rings are oriented with the superlevel region on their left: outer
//! boundaries come out counter-clockwise, holes clockwise. Membership in the
//! region is therefore the even-odd rule over all returned rings.
//!
//! Saddle cells are resolved by the mean of the four corners: when it lies
//! above the level the two high corners are joined through the cell center.

use std::collections::BTreeMap;

use thiserror::Error;

use super::raster::RasterGrid;
use super::vector::{Point2, Polygon2D};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("every cell of the grid is nodata")]
    AllNodata,
    #[error("contouring needs at least a 2x2 grid, got {ncols}x{nrows}")]
    TooSmall { ncols: usize, nrows: usize },
    #[error("contour level must be finite")]
    NonFiniteLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeId {
    /// Between padded samples (i, j) and (i + 1, j).
    Horizontal(usize, usize),
    /// Between padded samples (i, j) and (i, j + 1).
    Vertical(usize, usize),
}

struct Padded<'a> {
    grid: &'a RasterGrid,
    level: f64,
}

impl Padded<'_> {
    /// Sample at padded index; the outer ring and nodata read as -inf.
    fn z(&self, i: usize, j: usize) -> f64 {
        if i == 0 || j == 0 || i > self.grid.ncols() || j > self.grid.nrows() {
            return f64::NEG_INFINITY;
        }
        self.grid.get(i - 1, j - 1).unwrap_or(f64::NEG_INFINITY)
    }

    fn inside(&self, i: usize, j: usize) -> bool {
        self.z(i, j) > self.level
    }

    fn position(&self, i: usize, j: usize) -> Point2 {
        let (x0, y0) = self.grid.origin();
        let cs = self.grid.cell_size();
        [
            x0 + (i as f64 - 0.5) * cs,
            y0 + (j as f64 - 0.5) * cs,
        ]
    }

    fn crossing(&self, edge: EdgeId) -> Point2 {
        let (a, b) = match edge {
            EdgeId::Horizontal(i, j) => ((i, j), (i + 1, j)),
            EdgeId::Vertical(i, j) => ((i, j), (i, j + 1)),
        };
        let (za, zb) = (self.z(a.0, a.1), self.z(b.0, b.1));
        let (pa, pb) = (self.position(a.0, a.1), self.position(b.0, b.1));
        if za == f64::NEG_INFINITY {
            return pb;
        }
        if zb == f64::NEG_INFINITY {
            return pa;
        }
        let t = (self.level - za) / (zb - za);
        [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
    }
}

/// Extracts closed iso-contour rings at `level` in world coordinates.
pub fn extract_contour(grid: &RasterGrid, level: f64) -> Result<Vec<Polygon2D>, ContourError> {
    if !level.is_finite() {
        return Err(ContourError::NonFiniteLevel);
    }
    if grid.ncols() < 2 || grid.nrows() < 2 {
        return Err(ContourError::TooSmall {
            ncols: grid.ncols(),
            nrows: grid.nrows(),
        });
    }
    let Some((lo, hi)) = grid.value_range() else {
        return Err(ContourError::AllNodata);
    };
    if level < lo || level > hi {
        return Ok(Vec::new());
    }

    let field = Padded { grid, level };
    let mut next: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for j in 0..=grid.nrows() {
        for i in 0..=grid.ncols() {
            for (from, to) in cell_segments(&field, i, j) {
                next.insert(from, to);
            }
        }
    }

    let mut rings = Vec::new();
    while let Some((&start, _)) = next.iter().next() {
        let mut points: Vec<Point2> = Vec::new();
        let mut edge = start;
        loop {
            let p = field.crossing(edge);
            if points.last() != Some(&p) {
                points.push(p);
            }
            let Some(to) = next.remove(&edge) else { break };
            edge = to;
            if edge == start {
                break;
            }
        }
        while points.len() > 1 && points.first() == points.last() {
            points.pop();
        }
        if let Ok(ring) = Polygon2D::new(points) {
            rings.push(ring);
        }
    }
    Ok(rings)
}

/// Directed segments (exit edge -> enter edge) inside one padded cell.
fn cell_segments(field: &Padded<'_>, i: usize, j: usize) -> Vec<(EdgeId, EdgeId)> {
    let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
    let edges = [
        EdgeId::Horizontal(i, j),
        EdgeId::Vertical(i + 1, j),
        EdgeId::Horizontal(i, j + 1),
        EdgeId::Vertical(i, j),
    ];
    let inside = corners.map(|(a, b)| field.inside(a, b));

    // (edge, is_exit) in counter-clockwise order around the cell.
    let mut crossings = Vec::with_capacity(4);
    for k in 0..4 {
        let (a, b) = (inside[k], inside[(k + 1) % 4]);
        if a != b {
            crossings.push((edges[k], a));
        }
    }
    match crossings.len() {
        0 => Vec::new(),
        2 => {
            let (exit, enter) = if crossings[0].1 {
                (crossings[0].0, crossings[1].0)
            } else {
                (crossings[1].0, crossings[0].0)
            };
            vec![(exit, enter)]
        }
        4 => {
            let sum: f64 = corners.iter().map(|&(a, b)| field.z(a, b)).sum();
            let center_inside = sum / 4.0 > field.level;
            let mut out = Vec::with_capacity(2);
            for k in 0..4 {
                let (edge, is_exit) = crossings[k];
                if !is_exit {
                    continue;
                }
                let partner = if center_inside {
                    crossings[(k + 1) % 4]
                } else {
                    crossings[(k + 3) % 4]
                };
                out.push((edge, partner.0));
            }
            out
        }
        _ => unreachable!("a cell boundary changes state an even number of times"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(ncols: usize, nrows: usize, values: Vec<f64>) -> RasterGrid {
        RasterGrid::new(ncols, nrows, 10.0, (0.0, 0.0), Some(-9999.0), values).unwrap()
    }

    #[test]
    fn level_above_constant_grid_is_empty() {
        let g = grid(3, 3, vec![100.0; 9]);
        assert!(extract_contour(&g, 113.0).unwrap().is_empty());
    }

    #[test]
    fn all_nodata_is_an_error() {
        let g = grid(2, 2, vec![-9999.0; 4]);
        assert_eq!(extract_contour(&g, 1.0), Err(ContourError::AllNodata));
    }

    #[test]
    fn peak_gives_one_ccw_diamond() {
        let mut v = vec![100.0; 9];
        v[4] = 120.0;
        let rings = extract_contour(&grid(3, 3, v), 113.0).unwrap();
        assert_eq!(rings.len(), 1);
        let ring = &rings[0];
        // Hand-traced: each crossing sits 13/20 of the way from the peak
        // sample at (15, 15) toward a neighbor 10 m away.
        let d = 10.0 * (113.0 - 120.0) / (100.0 - 120.0);
        let mut expected = vec![[15.0 - d, 15.0], [15.0, 15.0 - d], [15.0 + d, 15.0], [15.0, 15.0 + d]];
        let mut got = ring.vertices().to_vec();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, e) in got.iter().zip(&expected) {
            assert!((g[0] - e[0]).abs() < 1e-12 && (g[1] - e[1]).abs() < 1e-12, "{g:?} vs {e:?}");
        }
        assert!(ring.signed_area() > 0.0);
        assert!(ring.contains([15.0, 15.0]));
    }

    #[test]
    fn saddle_resolution_follows_center_mean() {
        // High corners on one diagonal.
        let joined = extract_contour(&grid(2, 2, vec![0.0, 10.0, 10.0, 0.0]), 4.0).unwrap();
        let split = extract_contour(&grid(2, 2, vec![0.0, 10.0, 10.0, 0.0]), 6.0).unwrap();
        assert_eq!(joined.len(), 1);
        assert_eq!(split.len(), 2);
    }
}
