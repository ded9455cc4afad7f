//! Manifest, booklet and materials estimate.

mod booklet;
mod manifest;
mod materials;

pub use booklet::render_booklet;
pub use manifest::{
    build_manifest, manifest_json, parse_manifest, round_significant, Adjustment, Failure,
    FileEntry, FileRole, FlatPlateEntry, Manifest, ManifestError, MunicipalityEntry,
    MunicipalityOutput, RecordEntry, ServingEntry, ServingOutput, VesselEntry, VesselFiles,
    Vessels, TOOL_NAME, TOOL_VERSION,
};
pub use materials::{materials_estimate, MaterialsEstimate};
