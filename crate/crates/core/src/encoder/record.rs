//! Municipality records and their CSV form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodata::Polyline2D;

/// One municipality's ecological measurements, in meters unless noted.
#[derive(Debug, Clone, PartialEq)]
pub struct MunicipalityRecord {
    pub name: String,
    pub reedbed_length: f64,
    pub reedbed_cuts: u32,
    /// Ignored when `reedbed_cuts == 0`.
    pub avg_cut_distance: f64,
    pub coastline_length: f64,
    pub artificial_shoreline: f64,
    pub builtup_fraction: f64,
    /// Terrain slope in percent.
    pub slope: f64,
    pub shoreline: Polyline2D,
    /// Values were reconstructed from imagery rather than source tables.
    pub reconstructed: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecordError {
    #[error("{field} must be finite")]
    NonFinite { field: &'static str },
    #[error("reedbed_length must be >= 0, got {0}")]
    NegativeReedbed(f64),
    #[error("coastline_length must be > 0, got {0}")]
    NonpositiveCoastline(f64),
    #[error("artificial_shoreline {artificial} must lie within 0..={coastline}")]
    ArtificialOutOfRange { artificial: f64, coastline: f64 },
    #[error("builtup_fraction must lie within 0..=1, got {0}")]
    FractionOutOfRange(f64),
    #[error("slope must be >= 0, got {0}")]
    NegativeSlope(f64),
    #[error("avg_cut_distance must be > 0 when reedbed_cuts > 0, got {0}")]
    MissingCutDistance(f64),
    #[error("name must be non-empty and usable as a directory name, got `{0}`")]
    BadName(String),
    #[error("no shoreline geometry named `{0}`")]
    MissingShoreline(String),
}

impl MunicipalityRecord {
    /// Checks the record invariants.
    pub fn validate(&self) -> Result<(), RecordError> {
        validate_name(&self.name)?;
        for (field, v) in [
            ("reedbed_length", self.reedbed_length),
            ("avg_cut_distance", self.avg_cut_distance),
            ("coastline_length", self.coastline_length),
            ("artificial_shoreline", self.artificial_shoreline),
            ("builtup_fraction", self.builtup_fraction),
            ("slope", self.slope),
        ] {
            if !v.is_finite() {
                return Err(RecordError::NonFinite { field });
            }
        }
        if self.reedbed_length < 0.0 {
            return Err(RecordError::NegativeReedbed(self.reedbed_length));
        }
        if self.coastline_length <= 0.0 {
            return Err(RecordError::NonpositiveCoastline(self.coastline_length));
        }
        if self.artificial_shoreline < 0.0 || self.artificial_shoreline > self.coastline_length {
            return Err(RecordError::ArtificialOutOfRange {
                artificial: self.artificial_shoreline,
                coastline: self.coastline_length,
            });
        }
        if !(0.0..=1.0).contains(&self.builtup_fraction) {
            return Err(RecordError::FractionOutOfRange(self.builtup_fraction));
        }
        if self.slope < 0.0 {
            return Err(RecordError::NegativeSlope(self.slope));
        }
        if self.reedbed_cuts > 0 && self.avg_cut_distance <= 0.0 {
            return Err(RecordError::MissingCutDistance(self.avg_cut_distance));
        }
        Ok(())
    }

    /// Reedbed length per meter of coastline.
    pub fn reedbed_coastline_ratio(&self) -> f64 {
        self.reedbed_length / self.coastline_length
    }
}

fn validate_name(name: &str) -> Result<(), RecordError> {
    let bad = name.trim().is_empty()
        || name != name.trim()
        || name == "."
        || name == ".."
        || name.contains(['/', '\\', '\0']);
    if bad {
        Err(RecordError::BadName(name.to_string()))
    } else {
        Ok(())
    }
}

/// One CSV row. Column names are the serde field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub name: String,
    pub reedbed_length_m: f64,
    pub reedbed_cuts: u32,
    #[serde(default)]
    pub avg_cut_distance_m: f64,
    pub coastline_length_m: f64,
    pub artificial_shoreline_m: f64,
    pub builtup_fraction: f64,
    pub slope_percent: f64,
    #[serde(default)]
    pub reconstructed: bool,
}

pub const RECORD_CSV_HEADER: &str = "name,reedbed_length_m,reedbed_cuts,avg_cut_distance_m,coastline_length_m,artificial_shoreline_m,builtup_fraction,slope_percent,reconstructed";

impl RecordRow {
    pub fn into_record(self, shoreline: Polyline2D) -> Result<MunicipalityRecord, RecordError> {
        let record = MunicipalityRecord {
            name: self.name,
            reedbed_length: self.reedbed_length_m,
            reedbed_cuts: self.reedbed_cuts,
            avg_cut_distance: self.avg_cut_distance_m,
            coastline_length: self.coastline_length_m,
            artificial_shoreline: self.artificial_shoreline_m,
            builtup_fraction: self.builtup_fraction,
            slope: self.slope_percent,
            shoreline,
            reconstructed: self.reconstructed,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn from_record(record: &MunicipalityRecord) -> Self {
        Self {
            name: record.name.clone(),
            reedbed_length_m: record.reedbed_length,
            reedbed_cuts: record.reedbed_cuts,
            avg_cut_distance_m: record.avg_cut_distance,
            coastline_length_m: record.coastline_length,
            artificial_shoreline_m: record.artificial_shoreline,
            builtup_fraction: record.builtup_fraction,
            slope_percent: record.slope,
            reconstructed: record.reconstructed,
        }
    }
}

#[derive(Debug, Error)]
pub enum CsvInputError {
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("duplicate municipality `{name}` on line {line}")]
    Duplicate { name: String, line: u64 },
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

/// Reads record rows. Malformed CSV is an input error; semantic checks are
/// left to [`RecordRow::into_record`] so that one bad municipality does not
/// block the others.
pub fn read_record_rows(text: &str) -> Result<Vec<RecordRow>, CsvInputError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    let mut seen = BTreeMap::new();
    for result in reader.deserialize::<RecordRow>() {
        let row = result.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CsvInputError::Row {
                line,
                message: e.to_string(),
            }
        })?;
        let line = rows.len() as u64 + 2;
        if seen.insert(row.name.clone(), line).is_some() {
            return Err(CsvInputError::Duplicate { name: row.name, line });
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_record_rows(rows: &[RecordRow]) -> Result<String, csv::Error> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn sample_record() -> MunicipalityRecord {
        MunicipalityRecord {
            name: "Zánka".into(),
            reedbed_length: 2513.8,
            reedbed_cuts: 6,
            avg_cut_distance: 180.0,
            coastline_length: 5000.0,
            artificial_shoreline: 2500.0,
            builtup_fraction: 0.25,
            slope: 12.0,
            shoreline: Polyline2D::new(vec![[0.0, 0.0], [2000.0, 500.0], [4480.0, 0.0]]).unwrap(),
            reconstructed: false,
        }
    }

    #[test]
    fn record_invariants() {
        let ok = sample_record();
        assert!(ok.validate().is_ok());
        let mut r = ok.clone();
        r.coastline_length = 0.0;
        assert_eq!(r.validate(), Err(RecordError::NonpositiveCoastline(0.0)));
        let mut r = ok.clone();
        r.artificial_shoreline = 6000.0;
        assert!(matches!(r.validate(), Err(RecordError::ArtificialOutOfRange { .. })));
        let mut r = ok.clone();
        r.builtup_fraction = 1.5;
        assert!(r.validate().is_err());
        let mut r = ok.clone();
        r.avg_cut_distance = 0.0;
        assert_eq!(r.validate(), Err(RecordError::MissingCutDistance(0.0)));
        r.reedbed_cuts = 0;
        assert!(r.validate().is_ok());
        let mut r = ok;
        r.name = "../x".into();
        assert!(matches!(r.validate(), Err(RecordError::BadName(_))));
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let row = RecordRow::from_record(&sample_record());
        let text = write_record_rows(std::slice::from_ref(&row)).unwrap();
        assert!(text.starts_with(RECORD_CSV_HEADER));
        assert_eq!(read_record_rows(&text).unwrap(), vec![row]);

        let bad = format!("{RECORD_CSV_HEADER}\nA,1,x,1,1,1,0,0,false\n");
        assert!(matches!(read_record_rows(&bad), Err(CsvInputError::Row { line: 2, .. })));
        let dup = format!("{RECORD_CSV_HEADER}\nA,1,1,1,1,1,0,0,false\nA,1,1,1,1,1,0,0,false\n");
        assert!(matches!(read_record_rows(&dup), Err(CsvInputError::Duplicate { line: 3, .. })));
    }
}
