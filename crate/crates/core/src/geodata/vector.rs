//! Planar polygons and polylines, plus GeoJSON ingestion.

use geojson::{GeoJson, Value};
use thiserror::Error;

pub type Point2 = [f64; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapeError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewPolygonVertices(usize),
    #[error("polygon has zero signed area")]
    ZeroArea,
    #[error("polyline needs at least 2 vertices, got {0}")]
    TooFewPolylineVertices(usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
}

/// A simple closed ring. The closing edge is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon2D {
    vertices: Vec<Point2>,
}

impl Polygon2D {
    /// Builds a ring, dropping a repeated closing vertex if present.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, ShapeError> {
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if let Some(i) = vertices.iter().position(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(ShapeError::NonFinite(i));
        }
        if vertices.len() < 3 {
            return Err(ShapeError::TooFewPolygonVertices(vertices.len()));
        }
        let poly = Self { vertices };
        if poly.signed_area() == 0.0 {
            return Err(ShapeError::ZeroArea);
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    /// Shoelace area, positive for counter-clockwise rings.
    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            acc += a[0] * b[1] - b[0] * a[1];
        }
        acc * 0.5
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    /// Even-odd containment that also accepts points lying on an edge.
    pub fn contains(&self, p: Point2) -> bool {
        ring_contains(&self.vertices, p)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

/// An open chain of at least two vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline2D {
    vertices: Vec<Point2>,
}

impl Polyline2D {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, ShapeError> {
        if let Some(i) = vertices.iter().position(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(ShapeError::NonFinite(i));
        }
        if vertices.len() < 2 {
            return Err(ShapeError::TooFewPolylineVertices(vertices.len()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn length(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
            .sum()
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    /// True when every vertex coincides with the first one.
    pub fn is_degenerate(&self) -> bool {
        let first = self.vertices[0];
        self.vertices.iter().all(|p| *p == first)
    }

    /// True when the first and last vertices coincide.
    pub fn is_closed(&self) -> bool {
        self.vertices.len() > 2 && self.vertices.first() == self.vertices.last()
    }
}

fn bbox(points: &[Point2]) -> (Point2, Point2) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

pub(crate) fn on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    cross == 0.0
        && p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

/// Even-odd ring test; points on an edge count as inside.
pub(crate) fn ring_contains(ring: &[Point2], p: Point2) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if on_segment(p, a, b) {
            return true;
        }
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x_cross = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

#[derive(Debug, Error)]
pub enum GeoJsonError {
    #[error("invalid GeoJSON: {0}")]
    Parse(Box<geojson::Error>),
    #[error("expected a FeatureCollection")]
    NotFeatureCollection,
    #[error("feature {index}: missing string property `{key}`")]
    MissingName { index: usize, key: String },
    #[error("feature {index} ({name}): unsupported geometry type {kind}; only Polygon and LineString are accepted")]
    UnsupportedGeometry {
        index: usize,
        name: String,
        kind: String,
    },
    #[error("feature {index} ({name}): expected {expected} geometry, got {found}")]
    WrongGeometry {
        index: usize,
        name: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("feature {index} ({name}): {source}")]
    Shape {
        index: usize,
        name: String,
        source: ShapeError,
    },
}

impl From<geojson::Error> for GeoJsonError {
    fn from(e: geojson::Error) -> Self {
        GeoJsonError::Parse(Box::new(e))
    }
}

/// A named geometry read from a GeoJSON feature.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedShape {
    /// Polygon exterior ring; interior rings are kept as separate rings.
    Polygon { name: String, rings: Vec<Polygon2D> },
    Line { name: String, line: Polyline2D },
}

impl NamedShape {
    pub fn name(&self) -> &str {
        match self {
            NamedShape::Polygon { name, .. } | NamedShape::Line { name, .. } => name,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            NamedShape::Polygon { .. } => "Polygon",
            NamedShape::Line { .. } => "LineString",
        }
    }
}

/// Reads a FeatureCollection, naming each feature by the string property
/// `name_key`. Geometry types other than Polygon and LineString are rejected.
pub fn read_feature_collection(text: &str, name_key: &str) -> Result<Vec<NamedShape>, GeoJsonError> {
    let GeoJson::FeatureCollection(fc) = text.parse::<GeoJson>()? else {
        return Err(GeoJsonError::NotFeatureCollection);
    };
    let mut out = Vec::with_capacity(fc.features.len());
    for (index, feature) in fc.features.iter().enumerate() {
        let name = feature
            .property(name_key)
            .and_then(|v| v.as_str())
            .ok_or_else(|| GeoJsonError::MissingName {
                index,
                key: name_key.to_string(),
            })?
            .to_string();
        let shape_err = |source| GeoJsonError::Shape {
            index,
            name: name.clone(),
            source,
        };
        let shape = match feature.geometry.as_ref().map(|g| &g.value) {
            Some(Value::Polygon(rings)) => {
                let rings = rings
                    .iter()
                    .map(|ring| Polygon2D::new(ring.iter().map(|p| [p[0], p[1]]).collect()))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(shape_err)?;
                NamedShape::Polygon {
                    name: name.clone(),
                    rings,
                }
            }
            Some(Value::LineString(points)) => NamedShape::Line {
                name: name.clone(),
                line: Polyline2D::new(points.iter().map(|p| [p[0], p[1]]).collect())
                    .map_err(shape_err)?,
            },
            Some(other) => {
                return Err(GeoJsonError::UnsupportedGeometry {
                    index,
                    name,
                    kind: other.type_name().to_string(),
                })
            }
            None => {
                return Err(GeoJsonError::UnsupportedGeometry {
                    index,
                    name,
                    kind: "null".to_string(),
                })
            }
        };
        out.push(shape);
    }
    Ok(out)
}

/// Reads LineString features only.
pub fn read_polylines(text: &str, name_key: &str) -> Result<Vec<(String, Polyline2D)>, GeoJsonError> {
    read_feature_collection(text, name_key)?
        .into_iter()
        .enumerate()
        .map(|(index, shape)| match shape {
            NamedShape::Line { name, line } => Ok((name, line)),
            other => Err(GeoJsonError::WrongGeometry {
                index,
                name: other.name().to_string(),
                expected: "LineString",
                found: other.kind(),
            }),
        })
        .collect()
}

/// Reads Polygon features only; each entry keeps all rings of the polygon.
pub fn read_polygons(text: &str, name_key: &str) -> Result<Vec<(String, Vec<Polygon2D>)>, GeoJsonError> {
    read_feature_collection(text, name_key)?
        .into_iter()
        .enumerate()
        .map(|(index, shape)| match shape {
            NamedShape::Polygon { name, rings } => Ok((name, rings)),
            other => Err(GeoJsonError::WrongGeometry {
                index,
                name: other.name().to_string(),
                expected: "Polygon",
                found: other.kind(),
            }),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_invariants() {
        assert!(matches!(
            Polygon2D::new(vec![[0.0, 0.0], [1.0, 0.0]]),
            Err(ShapeError::TooFewPolygonVertices(2))
        ));
        assert!(matches!(
            Polygon2D::new(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]),
            Err(ShapeError::ZeroArea)
        ));
        let closed = Polygon2D::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert_eq!(closed.vertices().len(), 3);
        assert_eq!(closed.signed_area(), 0.5);
    }

    #[test]
    fn containment_includes_boundary() {
        let sq = Polygon2D::new(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]).unwrap();
        assert!(sq.contains([1.0, 1.0]));
        assert!(sq.contains([2.0, 1.0]));
        assert!(sq.contains([0.0, 0.0]));
        assert!(!sq.contains([2.5, 1.0]));
    }

    #[test]
    fn polyline_needs_two_points() {
        assert!(Polyline2D::new(vec![[0.0, 0.0]]).is_err());
        let l = Polyline2D::new(vec![[0.0, 0.0], [3.0, 4.0]]).unwrap();
        assert_eq!(l.length(), 5.0);
    }

    #[test]
    fn geojson_rejects_points() {
        let text = r#"{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":{"name":"A"},"geometry":{"type":"Point","coordinates":[1,2]}}]}"#;
        let err = read_feature_collection(text, "name").unwrap_err();
        assert!(matches!(err, GeoJsonError::UnsupportedGeometry { ref kind, .. } if kind == "Point"));
    }

    #[test]
    fn geojson_reads_lines_and_polygons() {
        let text = r#"{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":{"name":"Zánka"},"geometry":{"type":"LineString","coordinates":[[0,0],[10,5]]}},
            {"type":"Feature","properties":{"name":"Tihany"},"geometry":{"type":"Polygon","coordinates":[[[0,0],[4,0],[4,4],[0,0]]]}}]}"#;
        let shapes = read_feature_collection(text, "name").unwrap();
        assert_eq!(shapes[0].name(), "Zánka");
        assert!(matches!(&shapes[1], NamedShape::Polygon { rings, .. } if rings.len() == 1));
        assert!(matches!(read_polylines(text, "name"), Err(GeoJsonError::WrongGeometry { index: 1, .. })));
    }
}
