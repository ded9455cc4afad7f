//! Geospatial inputs: rasters, vector shapes and the scalar quantities
//! derived from them.

mod contour;
mod profile;
mod raster;
mod scale;
mod vector;
mod zonal;

pub use contour::{extract_contour, ContourError};
pub use profile::{
    bilinear, extract_profile, slope_percent, ElevationProfile, ProfileError,
    DEFAULT_PROFILE_SAMPLES,
};
pub use raster::{parse_ascii_grid, GridError, GridParseError, RasterGrid};
pub use scale::{scale_polyline, FitReport, MapScale, ScaleError};
pub use vector::{
    read_feature_collection, read_polygons, read_polylines, GeoJsonError, NamedShape, Point2,
    Polygon2D, Polyline2D, ShapeError,
};
pub use zonal::{builtup_fraction, builtup_fraction_masked, ZonalError, ZonalMean};
