//! Elevation profiles sampled along a segment, and their slope.

use thiserror::Error;

use super::raster::RasterGrid;
use super::vector::Point2;

/// Default number of samples along a profile line.
pub const DEFAULT_PROFILE_SAMPLES: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("a profile needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("profile distances must start at 0 and strictly increase (sample {0})")]
    NonIncreasing(usize),
    #[error("profile endpoints coincide")]
    DegenerateSegment,
    #[error("profile point ({x}, {y}) lies outside the grid extent")]
    OutsideExtent { x: f64, y: f64 },
    #[error("sample {index} at ({x}, {y}) has only nodata neighbors")]
    NoData { index: usize, x: f64, y: f64 },
}

/// `(distance along line, elevation)` pairs in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationProfile {
    samples: Vec<(f64, f64)>,
}

impl ElevationProfile {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self, ProfileError> {
        if samples.len() < 2 {
            return Err(ProfileError::TooFewSamples(samples.len()));
        }
        if samples[0].0 != 0.0 {
            return Err(ProfileError::NonIncreasing(0));
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(ProfileError::NonIncreasing(i + 1));
            }
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The same terrain walked from the far end.
    pub fn reversed(&self) -> Self {
        let total = self.samples.last().map_or(0.0, |s| s.0);
        Self {
            samples: self.samples.iter().rev().map(|&(d, z)| (total - d, z)).collect(),
        }
    }
}

/// Samples `n_samples` evenly spaced points from `a` to `b` (inclusive) with
/// bilinear interpolation between cell centers. Nodata neighbors are dropped
/// and the remaining weights renormalized.
pub fn extract_profile(
    grid: &RasterGrid,
    a: Point2,
    b: Point2,
    n_samples: usize,
) -> Result<ElevationProfile, ProfileError> {
    if n_samples < 2 {
        return Err(ProfileError::TooFewSamples(n_samples));
    }
    if a == b {
        return Err(ProfileError::DegenerateSegment);
    }
    let (x0, y0, x1, y1) = grid.extent();
    for p in [a, b] {
        if p[0] < x0 || p[0] > x1 || p[1] < y0 || p[1] > y1 {
            return Err(ProfileError::OutsideExtent { x: p[0], y: p[1] });
        }
    }
    let length = (b[0] - a[0]).hypot(b[1] - a[1]);
    let mut samples = Vec::with_capacity(n_samples);
    for index in 0..n_samples {
        let t = index as f64 / (n_samples - 1) as f64;
        let (x, y) = if index + 1 == n_samples {
            (b[0], b[1])
        } else {
            (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
        };
        let z = bilinear(grid, x, y).ok_or(ProfileError::NoData { index, x, y })?;
        samples.push((t * length, z));
    }
    ElevationProfile::new(samples)
}

/// Bilinear interpolation of cell-center values; outside the hull of the
/// centers the nearest border row/column is used.
pub fn bilinear(grid: &RasterGrid, x: f64, y: f64) -> Option<f64> {
    let (ox, oy) = grid.origin();
    let cs = grid.cell_size();
    let (c0, tx) = axis_weights((x - ox) / cs - 0.5, grid.ncols());
    let (r0, ty) = axis_weights((y - oy) / cs - 0.5, grid.nrows());
    let c1 = (c0 + 1).min(grid.ncols() - 1);
    let r1 = (r0 + 1).min(grid.nrows() - 1);
    if let (Some(v00), Some(v10), Some(v01), Some(v11)) = (
        grid.get(c0, r0),
        grid.get(c1, r0),
        grid.get(c0, r1),
        grid.get(c1, r1),
    ) {
        let bottom = v00 + tx * (v10 - v00);
        let top = v01 + tx * (v11 - v01);
        return Some(bottom + ty * (top - bottom));
    }
    let taps = [
        (c0, r0, (1.0 - tx) * (1.0 - ty)),
        (c1, r0, tx * (1.0 - ty)),
        (c0, r1, (1.0 - tx) * ty),
        (c1, r1, tx * ty),
    ];
    let mut acc = 0.0;
    let mut weight = 0.0;
    for (c, r, w) in taps {
        if let Some(v) = grid.get(c, r) {
            acc += w * v;
            weight += w;
        }
    }
    (weight > 0.0).then(|| acc / weight)
}

fn axis_weights(f: f64, n: usize) -> (usize, f64) {
    if n < 2 {
        return (0, 0.0);
    }
    let base = f.floor().clamp(0.0, (n - 2) as f64);
    let t = (f - base).clamp(0.0, 1.0);
    (base as usize, t)
}

/// `100 * |b|` for the least-squares slope `b` of elevation against distance.
pub fn slope_percent(profile: &ElevationProfile) -> f64 {
    let s = profile.samples();
    let n = s.len() as f64;
    let mean_d = s.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_z = s.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for &(d, z) in s {
        sxy += (d - mean_d) * (z - mean_z);
        sxx += (d - mean_d) * (d - mean_d);
    }
    100.0 * (sxy / sxx).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> RasterGrid {
        RasterGrid::from_fn(20, 10, 10.0, (0.0, 0.0), |x, _| 100.0 + 0.2 * x).unwrap()
    }

    #[test]
    fn constant_grid_profile() {
        let g = RasterGrid::new(4, 4, 10.0, (0.0, 0.0), None, vec![104.5; 16]).unwrap();
        let p = extract_profile(&g, [1.0, 1.0], [39.0, 39.0], 7).unwrap();
        assert!(p.samples().iter().all(|s| s.1 == 104.5));
        assert_eq!(slope_percent(&p), 0.0);
    }

    #[test]
    fn plane_is_reproduced() {
        let p = extract_profile(&ramp(), [40.0, 50.0], [90.0, 50.0], 11).unwrap();
        let s = p.samples();
        assert!((s[0].1 - 108.0).abs() < 1e-9);
        assert!((s[10].1 - s[0].1 - 10.0).abs() < 1e-9);
        for &(d, z) in s {
            assert!((z - (108.0 + 0.2 * d)).abs() < 1e-9);
        }
    }

    #[test]
    fn two_samples_are_the_endpoints() {
        let p = extract_profile(&ramp(), [40.0, 50.0], [90.0, 50.0], 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.samples()[1].0, 50.0);
        assert!((p.samples()[1].1 - 118.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_requests() {
        let g = ramp();
        assert_eq!(
            extract_profile(&g, [0.0, 0.0], [0.0, 0.0], 4),
            Err(ProfileError::DegenerateSegment)
        );
        assert!(matches!(
            extract_profile(&g, [0.0, 0.0], [500.0, 0.0], 4),
            Err(ProfileError::OutsideExtent { .. })
        ));
        assert_eq!(
            extract_profile(&g, [0.0, 0.0], [1.0, 0.0], 1),
            Err(ProfileError::TooFewSamples(1))
        );
    }

    #[test]
    fn nodata_neighbors_are_renormalized_or_rejected() {
        let g = RasterGrid::new(2, 1, 10.0, (0.0, 0.0), Some(-1.0), vec![100.0, -1.0]).unwrap();
        assert_eq!(bilinear(&g, 8.0, 5.0), Some(100.0));
        let dead = RasterGrid::new(2, 1, 10.0, (0.0, 0.0), Some(-1.0), vec![-1.0, -1.0]).unwrap();
        assert!(matches!(
            extract_profile(&dead, [1.0, 5.0], [19.0, 5.0], 3),
            Err(ProfileError::NoData { index: 0, .. })
        ));
    }

    #[test]
    fn slopes_of_exact_ramps() {
        let up = ElevationProfile::new((0..=10).map(|i| (i as f64 * 10.0, 100.0 + 1.2 * i as f64)).collect()).unwrap();
        let down = ElevationProfile::new((0..=10).map(|i| (i as f64 * 10.0, 125.0 - 2.5 * i as f64)).collect()).unwrap();
        assert!((slope_percent(&up) - 12.0).abs() < 1e-9);
        assert!((slope_percent(&down) - 25.0).abs() < 1e-9);
    }

    #[test]
    fn profile_invariants() {
        assert!(ElevationProfile::new(vec![(0.0, 1.0)]).is_err());
        assert!(ElevationProfile::new(vec![(1.0, 1.0), (2.0, 1.0)]).is_err());
        assert!(ElevationProfile::new(vec![(0.0, 1.0), (0.0, 1.0)]).is_err());
    }
}
