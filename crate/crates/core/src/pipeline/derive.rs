//! Built-up fraction and slope per municipality from raster and vector
//! inputs.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{input_error, read_text, PipelineError};
use crate::geodata::{
    builtup_fraction_masked, extract_contour, extract_profile, parse_ascii_grid, read_polygons,
    read_polylines, slope_percent, Polygon2D, Polyline2D, RasterGrid, DEFAULT_PROFILE_SAMPLES,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedRow {
    pub name: String,
    pub builtup_fraction: f64,
    pub slope_percent: f64,
}

#[derive(Debug, Clone)]
pub struct DeriveRequest {
    pub dem: PathBuf,
    pub builtup: PathBuf,
    pub zones: PathBuf,
    pub profiles: PathBuf,
    /// Cells whose centers lie below this elevation are former lakebed and
    /// excluded from the built-up mean.
    pub lakebed_level: f64,
}

pub fn derive(req: &DeriveRequest) -> Result<Vec<DerivedRow>, PipelineError> {
    let dem = parse_ascii_grid(&read_text(&req.dem)?).map_err(|e| input_error(&req.dem, e))?;
    let builtup = parse_ascii_grid(&read_text(&req.builtup)?).map_err(|e| input_error(&req.builtup, e))?;
    builtup.validate_scores().map_err(|e| input_error(&req.builtup, e))?;
    let zones = read_polygons(&read_text(&req.zones)?, "name").map_err(|e| input_error(&req.zones, e))?;
    let profiles = read_polylines(&read_text(&req.profiles)?, "name").map_err(|e| input_error(&req.profiles, e))?;
    derive_rows(&dem, &builtup, &zones, &profiles, req.lakebed_level).map_err(|(which, message)| {
        let path = match which {
            Source::Dem => &req.dem,
            Source::Zones => &req.zones,
            Source::Profiles => &req.profiles,
        };
        input_error(path, message)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Dem,
    Zones,
    Profiles,
}

/// One row per zone, in zone order.
pub fn derive_rows(
    dem: &RasterGrid,
    builtup: &RasterGrid,
    zones: &[(String, Vec<Polygon2D>)],
    profiles: &[(String, Polyline2D)],
    lakebed_level: f64,
) -> Result<Vec<DerivedRow>, (Source, String)> {
    let shore = extract_contour(dem, lakebed_level).map_err(|e| (Source::Dem, e.to_string()))?;
    let above_lakebed = |p| shore.iter().filter(|ring| ring.contains(p)).count() % 2 == 1;
    let mut rows = Vec::with_capacity(zones.len());
    for (name, rings) in zones {
        let Some((outer, holes)) = rings.split_first() else {
            return Err((Source::Zones, format!("zone `{name}` has no rings")));
        };
        let mean = builtup_fraction_masked(builtup, outer, |p| {
            above_lakebed(p) && !holes.iter().any(|h| h.contains(p))
        })
        .map_err(|e| (Source::Zones, format!("zone `{name}`: {e}")))?;
        let line = profiles
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, l)| l)
            .ok_or_else(|| (Source::Profiles, format!("no profile for `{name}`")))?;
        let v = line.vertices();
        let profile = extract_profile(dem, v[0], v[v.len() - 1], DEFAULT_PROFILE_SAMPLES)
            .map_err(|e| (Source::Profiles, format!("profile `{name}`: {e}")))?;
        rows.push(DerivedRow {
            name: name.clone(),
            builtup_fraction: mean.fraction,
            slope_percent: slope_percent(&profile),
        });
    }
    Ok(rows)
}

pub fn write_derived(rows: &[DerivedRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("in-memory CSV write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}

pub fn read_derived(text: &str) -> Result<Vec<DerivedRow>, csv::Error> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
        .deserialize()
        .collect()
}
