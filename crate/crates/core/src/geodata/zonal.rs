//! Zonal mean of built-up scores.

use thiserror::Error;

use super::raster::RasterGrid;
use super::vector::{Point2, Polygon2D};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZonalError {
    #[error("empty zone: no valid cell center falls inside the polygon")]
    EmptyZone,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZonalMean {
    /// Mean of `score / 100` over contributing cells.
    pub fraction: f64,
    pub cells: usize,
}

/// Mean built-up fraction over cells whose centers lie inside or on `zone`.
pub fn builtup_fraction(grid: &RasterGrid, zone: &Polygon2D) -> Result<ZonalMean, ZonalError> {
    builtup_fraction_masked(grid, zone, |_| true)
}

/// Like [`builtup_fraction`], additionally requiring `mask(center)`.
pub fn builtup_fraction_masked(
    grid: &RasterGrid,
    zone: &Polygon2D,
    mask: impl Fn(Point2) -> bool,
) -> Result<ZonalMean, ZonalError> {
    let (lo, hi) = zone.bbox();
    let cols = index_span(lo[0], hi[0], grid.origin().0, grid.cell_size(), grid.ncols());
    let rows = index_span(lo[1], hi[1], grid.origin().1, grid.cell_size(), grid.nrows());
    let (Some(cols), Some(rows)) = (cols, rows) else {
        return Err(ZonalError::EmptyZone);
    };

    let mut sum = 0.0;
    let mut cells = 0usize;
    for row in rows {
        for col in cols.clone() {
            let Some(v) = grid.get(col, row) else { continue };
            let (x, y) = grid.cell_center(col, row);
            if zone.contains([x, y]) && mask([x, y]) {
                sum += v / 100.0;
                cells += 1;
            }
        }
    }
    if cells == 0 {
        return Err(ZonalError::EmptyZone);
    }
    Ok(ZonalMean {
        fraction: sum / cells as f64,
        cells,
    })
}

/// Cell indices whose centers may fall within `[lo, hi]`, padded by one cell
/// on each side so the exact containment test decides the borderline.
fn index_span(lo: f64, hi: f64, origin: f64, cell: f64, n: usize) -> Option<std::ops::Range<usize>> {
    let first = ((lo - origin) / cell - 0.5).floor() - 1.0;
    let last = ((hi - origin) / cell - 0.5).ceil() + 1.0;
    if last < 0.0 || first > (n as f64 - 1.0) {
        return None;
    }
    let first = first.max(0.0) as usize;
    let last = (last.min(n as f64 - 1.0)) as usize;
    Some(first..last + 1)
}
