//! The machine-readable record of a generation run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::materials::{materials_estimate, MaterialsEstimate};
use crate::config::Config;
use crate::encoder::{DeepPlateSpec, FlatPlateSpec, JugSpec, MugSpec, MunicipalityRecord, RecordRow, SegmentPlateSpec, ServingPlateSpec, VesselSet};
use crate::geodata::FitReport;
use crate::mesher::MeshStats;

pub const TOOL_NAME: &str = "tableware";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileRole {
    Body,
    Concrete,
    Uncut,
    Glass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub role: FileRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<MeshStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VesselEntry<S> {
    pub spec: S,
    pub files: Vec<FileEntry>,
}

/// Flat plate parameters; the outline itself lives in the SVG.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatPlateEntry {
    pub frame: [f64; 2],
    pub fits_frame: bool,
    pub fit: FitReport,
    pub outline_vertices: usize,
}

impl From<&FlatPlateSpec> for FlatPlateEntry {
    fn from(spec: &FlatPlateSpec) -> Self {
        Self {
            frame: [spec.frame.0, spec.frame.1],
            fits_frame: spec.fits_frame,
            fit: spec.fit,
            outline_vertices: spec.glass_outline.vertices().len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vessels {
    pub mug: VesselEntry<MugSpec>,
    pub jug: VesselEntry<JugSpec>,
    pub deep_plate: VesselEntry<DeepPlateSpec>,
    pub small_plate: VesselEntry<SegmentPlateSpec>,
    pub flat_plate: VesselEntry<FlatPlateEntry>,
}

/// A quantity the pipeline changed from what the data asked for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adjustment {
    pub vessel: String,
    pub quantity: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub clamped: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub suppressed: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub overflow: bool,
    pub requested: f64,
    pub applied: f64,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordEntry {
    #[serde(flatten)]
    pub values: RecordRow,
    /// Columns taken from derived geodata instead of the records file.
    pub derived_fields: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MunicipalityEntry {
    pub name: String,
    pub record: RecordEntry,
    pub vessels: Vessels,
    pub adjustments: Vec<Adjustment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServingEntry {
    pub vessel: VesselEntry<ServingPlateSpec>,
    pub adjustments: Vec<Adjustment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub name: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub units: String,
    pub config: serde_json::Map<String, serde_json::Value>,
    pub config_defaulted: Vec<String>,
    pub municipalities: Vec<MunicipalityEntry>,
    pub serving_plate: Option<ServingEntry>,
    pub materials: MaterialsEstimate,
    pub failures: Vec<Failure>,
}

/// Everything produced for one municipality.
#[derive(Debug, Clone)]
pub struct MunicipalityOutput {
    pub record: MunicipalityRecord,
    pub derived_fields: Vec<String>,
    pub specs: VesselSet,
    pub files: VesselFiles,
}

#[derive(Debug, Clone, Default)]
pub struct VesselFiles {
    pub mug: Vec<FileEntry>,
    pub jug: Vec<FileEntry>,
    pub deep_plate: Vec<FileEntry>,
    pub small_plate: Vec<FileEntry>,
    pub flat_plate: Vec<FileEntry>,
}

#[derive(Debug, Clone)]
pub struct ServingOutput {
    pub spec: ServingPlateSpec,
    pub files: Vec<FileEntry>,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{name}: {detail}")]
pub struct ManifestError {
    pub name: String,
    pub detail: String,
}

fn check_consistent(out: &MunicipalityOutput) -> Result<(), ManifestError> {
    let r = &out.record;
    let s = &out.specs;
    let fail = |detail: &str| {
        Err(ManifestError {
            name: r.name.clone(),
            detail: detail.to_string(),
        })
    };
    if s.mug.perforation_count != r.reedbed_cuts {
        return fail("mug perforations differ from reedbed cuts");
    }
    if s.jug.concrete_fraction != r.artificial_shoreline / r.coastline_length {
        return fail("jug concrete fraction differs from the shoreline record");
    }
    if s.small_plate.fraction != r.builtup_fraction || s.deep_plate.slope != r.slope {
        return fail("plate specs differ from the record");
    }
    Ok(())
}

fn adjustments_for(specs: &VesselSet) -> Vec<Adjustment> {
    let mut out = Vec::new();
    if let Some(requested) = specs.mug.requested_spacing {
        out.push(Adjustment {
            vessel: "mug".into(),
            quantity: "perforation_spacing_along_spiral".into(),
            clamped: true,
            suppressed: false,
            overflow: false,
            requested,
            applied: specs.mug.perforation_spacing_along_spiral,
        });
    }
    if let Some(a) = segment_adjustment("small_plate", &specs.small_plate) {
        out.push(a);
    }
    if !specs.flat_plate.fits_frame {
        let fit = specs.flat_plate.fit;
        out.push(Adjustment {
            vessel: "flat_plate".into(),
            quantity: "glass_outline_extent".into(),
            clamped: false,
            suppressed: false,
            overflow: true,
            requested: (fit.width_mm / fit.frame_width_mm).max(fit.height_mm / fit.frame_height_mm),
            applied: 1.0,
        });
    }
    out
}

fn segment_adjustment(vessel: &str, spec: &SegmentPlateSpec) -> Option<Adjustment> {
    spec.suppressed.then(|| Adjustment {
        vessel: vessel.into(),
        quantity: "segment_angle".into(),
        clamped: false,
        suppressed: true,
        overflow: false,
        requested: 360.0 * spec.fraction,
        applied: spec.segment_angle,
    })
}

fn concrete_volume(files: &[FileEntry]) -> f64 {
    files
        .iter()
        .filter(|f| f.role == FileRole::Concrete)
        .filter_map(|f| f.stats.as_ref())
        .map(|s| s.signed_volume_mm3)
        .sum()
}

fn piece_count(files: &[FileEntry]) -> usize {
    usize::from(files.iter().any(|f| f.role == FileRole::Body))
}

pub fn build_manifest(
    config: &Config,
    outputs: &[MunicipalityOutput],
    serving: Option<&ServingOutput>,
    failures: &[Failure],
) -> Result<Manifest, ManifestError> {
    let mut municipalities = Vec::with_capacity(outputs.len());
    let mut concrete = Vec::new();
    let mut pieces = 0;
    for out in outputs {
        check_consistent(out)?;
        let s = &out.specs;
        let f = &out.files;
        for files in [&f.mug, &f.jug, &f.deep_plate, &f.small_plate, &f.flat_plate] {
            concrete.push(concrete_volume(files));
            pieces += piece_count(files);
        }
        municipalities.push(MunicipalityEntry {
            name: out.record.name.clone(),
            record: RecordEntry {
                values: RecordRow::from_record(&out.record),
                derived_fields: out.derived_fields.clone(),
            },
            vessels: Vessels {
                mug: VesselEntry { spec: s.mug.clone(), files: f.mug.clone() },
                jug: VesselEntry { spec: s.jug.clone(), files: f.jug.clone() },
                deep_plate: VesselEntry { spec: s.deep_plate.clone(), files: f.deep_plate.clone() },
                small_plate: VesselEntry { spec: s.small_plate.clone(), files: f.small_plate.clone() },
                flat_plate: VesselEntry { spec: FlatPlateEntry::from(&s.flat_plate), files: f.flat_plate.clone() },
            },
            adjustments: adjustments_for(s),
        });
    }
    let serving_plate = serving.map(|sv| {
        concrete.push(concrete_volume(&sv.files));
        pieces += piece_count(&sv.files);
        ServingEntry {
            vessel: VesselEntry { spec: sv.spec.clone(), files: sv.files.clone() },
            adjustments: segment_adjustment("serving_plate", &sv.spec.plate).into_iter().collect(),
        }
    });
    Ok(Manifest {
        tool: TOOL_NAME.into(),
        tool_version: TOOL_VERSION.into(),
        units: "mm".into(),
        config: config.snapshot(),
        config_defaulted: config.defaulted.clone(),
        municipalities,
        serving_plate,
        materials: materials_estimate(
            &concrete,
            pieces,
            config.encoder.concrete_density,
            config.fabrication.firing_kwh_per_piece,
        ),
        failures: failures.to_vec(),
    })
}

/// Six significant digits, the precision the manifest promises.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

fn round_floats(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64"));
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_floats),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with sorted keys and floats rounded to six significant digits.
pub fn manifest_json(manifest: &Manifest) -> String {
    let mut value = serde_json::to_value(manifest).expect("manifest serializes");
    round_floats(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

pub fn parse_manifest(text: &str) -> Result<Manifest, serde_json::Error> {
    serde_json::from_str(text)
}
