//! A constructed eleven-municipality collection for tests, examples and
//! demonstrations. The numbers are invented to reproduce the qualitative
//! relations between the real municipalities; they are not measurements.
//!
//! The derive inputs lay the municipalities out as 200 m wide bands on a
//! 20 m grid. Band `k` has a planar elevation ramp rising with its slope
//! away from the shore (`y = 0`) from 104.5 m, and a constant built-up
//! score equal to its built-up share.

use std::collections::HashMap;
use std::io;
use std::path::{Path, PathBuf};

use crate::encoder::{read_record_rows, MunicipalityRecord};
use crate::geodata::read_polylines;

pub const RECORDS_CSV: &str = include_str!("../fixtures/records.csv");
pub const SHORELINES_GEOJSON: &str = include_str!("../fixtures/shorelines.geojson");
pub const DINNER_SUBSET: &str = include_str!("../fixtures/dinner_subset.txt");
pub const DEM_ASC: &str = include_str!("../fixtures/derive/dem.asc");
pub const BUILTUP_ASC: &str = include_str!("../fixtures/derive/builtup.asc");
pub const ZONES_GEOJSON: &str = include_str!("../fixtures/derive/zones.geojson");
pub const PROFILES_GEOJSON: &str = include_str!("../fixtures/derive/profiles.geojson");

/// Elevation of the ancient lakebed edge in the derive inputs.
pub const LAKEBED_LEVEL: f64 = 113.0;
pub const BAND_WIDTH: f64 = 200.0;
pub const BASE_ELEVATION: f64 = 104.5;

/// The eleven records with their shorelines.
pub fn records() -> Vec<MunicipalityRecord> {
    let lines: HashMap<String, _> = read_polylines(SHORELINES_GEOJSON, "name")
        .expect("fixture shorelines parse")
        .into_iter()
        .collect();
    read_record_rows(RECORDS_CSV)
        .expect("fixture records parse")
        .into_iter()
        .map(|row| {
            let line = lines[&row.name].clone();
            row.into_record(line).expect("fixture records are valid")
        })
        .collect()
}

pub fn record(name: &str) -> MunicipalityRecord {
    records()
        .into_iter()
        .find(|r| r.name == name)
        .unwrap_or_else(|| panic!("no fixture record `{name}`"))
}

/// The eight municipalities served at the dinner.
pub fn dinner_subset() -> Vec<String> {
    DINNER_SUBSET.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect()
}

/// Paths of the fixture written to disk by [`write_fixture`].
#[derive(Debug, Clone)]
pub struct FixturePaths {
    pub records: PathBuf,
    pub shorelines: PathBuf,
    pub dinner_subset: PathBuf,
    pub dem: PathBuf,
    pub builtup: PathBuf,
    pub zones: PathBuf,
    pub profiles: PathBuf,
}

pub fn write_fixture(dir: &Path) -> io::Result<FixturePaths> {
    std::fs::create_dir_all(dir)?;
    let put = |name: &str, text: &str| -> io::Result<PathBuf> {
        let path = dir.join(name);
        std::fs::write(&path, text)?;
        Ok(path)
    };
    Ok(FixturePaths {
        records: put("records.csv", RECORDS_CSV)?,
        shorelines: put("shorelines.geojson", SHORELINES_GEOJSON)?,
        dinner_subset: put("dinner_subset.txt", DINNER_SUBSET)?,
        dem: put("dem.asc", DEM_ASC)?,
        builtup: put("builtup.asc", BUILTUP_ASC)?,
        zones: put("zones.geojson", ZONES_GEOJSON)?,
        profiles: put("profiles.geojson", PROFILES_GEOJSON)?,
    })
}
