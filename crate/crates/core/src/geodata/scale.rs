//! Map scales and fitting scaled outlines into a fabrication frame.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::vector::{Polyline2D, ShapeError};

/// A representative-fraction map scale `1:denominator`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MapScale(f64);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScaleError {
    #[error("map scale denominator must be positive and finite, got {0}")]
    Nonpositive(f64),
    #[error("cannot parse map scale `{0}`; expected `1:N`")]
    Syntax(String),
    #[error("frame dimensions must be positive, got {0} x {1} mm")]
    Frame(f64, f64),
    #[error("polyline is degenerate: all vertices coincide")]
    Degenerate,
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

impl MapScale {
    pub fn new(denominator: f64) -> Result<Self, ScaleError> {
        if denominator > 0.0 && denominator.is_finite() {
            Ok(Self(denominator))
        } else {
            Err(ScaleError::Nonpositive(denominator))
        }
    }

    pub fn denominator(self) -> f64 {
        self.0
    }

    /// Real-world meters to model millimeters.
    pub fn meters_to_model_mm(self, meters: f64) -> f64 {
        meters / self.0 * 1000.0
    }
}

impl fmt::Display for MapScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1:{}", self.0)
    }
}

impl FromStr for MapScale {
    type Err = ScaleError;

    /// Accepts `1:22400`, `1:22,400` or a bare denominator.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let denom = match t.split_once(':') {
            Some((num, den)) => {
                if num.trim() != "1" {
                    return Err(ScaleError::Syntax(s.to_string()));
                }
                den
            }
            None => t,
        };
        let cleaned: String = denom.chars().filter(|c| *c != ',' && *c != '_' && !c.is_whitespace()).collect();
        let v: f64 = cleaned.parse().map_err(|_| ScaleError::Syntax(s.to_string()))?;
        Self::new(v)
    }
}

impl Serialize for MapScale {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MapScale {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Number(n) => MapScale::new(n).map_err(serde::de::Error::custom),
        }
    }
}

/// Whether a scaled outline fits its frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub width_mm: f64,
    pub height_mm: f64,
    pub frame_width_mm: f64,
    pub frame_height_mm: f64,
    pub fits: bool,
}

/// Scales a polyline in meters to millimeters at `scale` and centers its
/// bounding box in a `frame` of `(width, height)` millimeters.
pub fn scale_polyline(
    line: &Polyline2D,
    scale: MapScale,
    frame: (f64, f64),
) -> Result<(Polyline2D, FitReport), ScaleError> {
    if !(frame.0 > 0.0 && frame.1 > 0.0) {
        return Err(ScaleError::Frame(frame.0, frame.1));
    }
    if line.is_degenerate() {
        return Err(ScaleError::Degenerate);
    }
    let (lo, hi) = line.bbox();
    let cx = 0.5 * (lo[0] + hi[0]);
    let cy = 0.5 * (lo[1] + hi[1]);
    let k = scale.meters_to_model_mm(1.0);
    let points = line
        .vertices()
        .iter()
        .map(|p| [(p[0] - cx) * k + frame.0 / 2.0, (p[1] - cy) * k + frame.1 / 2.0])
        .collect();
    let width = (hi[0] - lo[0]) * k;
    let height = (hi[1] - lo[1]) * k;
    let report = FitReport {
        width_mm: width,
        height_mm: height,
        frame_width_mm: frame.0,
        frame_height_mm: frame.1,
        fits: width <= frame.0 && height <= frame.1,
    };
    Ok((Polyline2D::new(points)?, report))
}
