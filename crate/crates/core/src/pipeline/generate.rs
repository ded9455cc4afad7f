//! Records and shorelines in, one directory of meshes per municipality out.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{input_error, read_derived, read_text, write_file, DerivedRow, PipelineError, BOOKLET_FILE, MANIFEST_FILE};
use crate::config::Config;
use crate::encoder::{encode_all, encode_serving_plate, read_record_rows, MunicipalityRecord, RecordError, RecordRow};
use crate::geodata::{read_polylines, Polyline2D};
use crate::mesher::{
    deep_plate_mesh, deep_plate_uncut_mesh, export_stl, export_svg_outline, flat_plate_mesh,
    jug_concrete_mesh, jug_mesh, mesh_stats, mug_mesh, parse_stl, segment_plate_concrete_mesh,
    segment_plate_mesh, MeshStats, TriangleMesh,
};
use crate::report::{
    build_manifest, manifest_json, parse_manifest, render_booklet, Failure, FileEntry, FileRole, Manifest,
    MunicipalityOutput, ServingOutput, VesselFiles,
};

/// Directory of the shared serving plate, beside the municipality directories.
pub const SERVING_DIR: &str = "serving_plate";

#[derive(Debug, Clone)]
pub struct GenerateRequest {
    pub records: PathBuf,
    pub shorelines: PathBuf,
    /// Output of the derive command, overriding record columns.
    pub derived: Option<PathBuf>,
    pub out: PathBuf,
    pub config: Config,
    pub only: Option<Vec<String>>,
    /// Members of the serving plate; all produced municipalities if unset.
    pub serving_subset: Option<Vec<String>>,
    /// Worker threads; `None` uses one per core.
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct GenerateSummary {
    pub manifest: Manifest,
    pub files_written: usize,
}

impl GenerateSummary {
    pub fn exit_code(&self) -> u8 {
        if self.manifest.failures.is_empty() {
            super::EXIT_OK
        } else {
            super::EXIT_PARTIAL
        }
    }
}

struct Artifact {
    file: &'static str,
    bytes: Vec<u8>,
}

/// Files a municipality directory may hold; stale ones are removed.
const MUNICIPALITY_FILES: [&str; 9] = [
    "mug.stl",
    "jug.stl",
    "jug_concrete.stl",
    "deep_plate.stl",
    "deep_plate_uncut.stl",
    "small_plate.stl",
    "small_plate_concrete.stl",
    "flat_plate.stl",
    "flat_plate_glass.svg",
];
const SERVING_FILES: [&str; 2] = ["serving_plate.stl", "serving_plate_concrete.stl"];

pub fn generate(req: &GenerateRequest) -> Result<GenerateSummary, PipelineError> {
    let rows = read_record_rows(&read_text(&req.records)?).map_err(|e| input_error(&req.records, e))?;
    let mut shorelines: HashMap<String, Polyline2D> = HashMap::new();
    for (name, line) in read_polylines(&read_text(&req.shorelines)?, "name").map_err(|e| input_error(&req.shorelines, e))? {
        if shorelines.insert(name.clone(), line).is_some() {
            return Err(input_error(&req.shorelines, format!("duplicate shoreline `{name}`")));
        }
    }
    let known: HashSet<&str> = rows.iter().map(|r| r.name.as_str()).collect();
    let mut derived: HashMap<String, DerivedRow> = HashMap::new();
    if let Some(path) = &req.derived {
        for row in read_derived(&read_text(path)?).map_err(|e| input_error(path, e))? {
            if !known.contains(row.name.as_str()) {
                return Err(input_error(path, format!("derived values for unknown municipality `{}`", row.name)));
            }
            derived.insert(row.name.clone(), row);
        }
    }

    let check_names = |names: &[String], flag: &str, pool: &HashSet<&str>| -> Result<(), PipelineError> {
        match names.iter().find(|n| !pool.contains(n.as_str())) {
            Some(n) => Err(PipelineError::Selection(format!("{flag}: unknown municipality `{n}`"))),
            None => Ok(()),
        }
    };
    let selected: Vec<&RecordRow> = match &req.only {
        Some(only) => {
            check_names(only, "--only", &known)?;
            rows.iter().filter(|r| only.contains(&r.name)).collect()
        }
        None => rows.iter().collect(),
    };
    if let Some(subset) = &req.serving_subset {
        let chosen: HashSet<&str> = selected.iter().map(|r| r.name.as_str()).collect();
        check_names(subset, "--serving-subset", &chosen)?;
    }

    let pool = rayon::ThreadPoolBuilder::new().num_threads(req.jobs.unwrap_or(0)).build()?;
    let results: Vec<Result<(MunicipalityOutput, usize), Failure>> = pool.install(|| {
        selected
            .par_iter()
            .map(|row| {
                let fail = |error: String| Failure {
                    name: row.name.clone(),
                    error,
                };
                let (output, artifacts) = build_municipality(row, &shorelines, derived.get(&row.name), &req.config).map_err(fail)?;
                let count = write_artifacts(&req.out, &row.name, &MUNICIPALITY_FILES, &artifacts).map_err(|e| fail(e.to_string()))?;
                Ok((output, count))
            })
            .collect()
    });

    let mut outputs = Vec::new();
    let mut failures = Vec::new();
    let mut files_written = 0;
    for result in results {
        match result {
            Ok((output, count)) => {
                files_written += count;
                outputs.push(output);
            }
            Err(f) => failures.push(f),
        }
    }

    let members: Vec<&MunicipalityRecord> = outputs
        .iter()
        .map(|o| &o.record)
        .filter(|r| req.serving_subset.as_ref().is_none_or(|s| s.contains(&r.name)))
        .collect();
    let mut serving = None;
    if !members.is_empty() {
        match build_serving(&members, &req.config) {
            Ok((output, artifacts)) => {
                files_written += write_artifacts(&req.out, SERVING_DIR, &SERVING_FILES, &artifacts)?;
                serving = Some(output);
            }
            Err(error) => failures.push(Failure {
                name: SERVING_DIR.into(),
                error,
            }),
        }
    }

    let json = manifest_json(&build_manifest(&req.config, &outputs, serving.as_ref(), &failures)?);
    write_file(&req.out.join(MANIFEST_FILE), json.as_bytes())?;
    let manifest = parse_manifest(&json).expect("manifest JSON parses back");
    write_file(&req.out.join(BOOKLET_FILE), render_booklet(&manifest).as_bytes())?;
    Ok(GenerateSummary {
        manifest,
        files_written: files_written + 2,
    })
}

fn write_artifacts(out: &Path, dir: &str, known: &[&str], artifacts: &[Artifact]) -> Result<usize, PipelineError> {
    let base = out.join(dir);
    for a in artifacts {
        write_file(&base.join(a.file), &a.bytes)?;
    }
    for stale in known.iter().filter(|f| !artifacts.iter().any(|a| a.file == **f)) {
        let _ = std::fs::remove_file(base.join(stale));
    }
    Ok(artifacts.len())
}

/// Exports a solid and checks the exported file, not the in-memory mesh.
fn solid(
    dir: &str,
    file: &'static str,
    role: FileRole,
    mesh: &TriangleMesh,
    genus: i64,
    artifacts: &mut Vec<Artifact>,
) -> Result<FileEntry, String> {
    let path = format!("{dir}/{file}");
    let bytes = export_stl(mesh).map_err(|e| format!("{path}: {e}"))?;
    let stats = mesh_stats(&parse_stl(&bytes).map_err(|e| format!("{path}: {e}"))?);
    if !mesh.is_empty() {
        check_solid(&stats, genus).map_err(|e| format!("{path}: {e}"))?;
    }
    artifacts.push(Artifact {
        file,
        bytes,
    });
    Ok(FileEntry {
        path,
        role,
        stats: Some(stats),
    })
}

pub(crate) fn check_solid(stats: &MeshStats, genus: i64) -> Result<(), String> {
    if !stats.watertight {
        return Err("mesh is not watertight".into());
    }
    if stats.genus != Some(genus) {
        return Err(format!("genus {:?}, expected {genus}", stats.genus));
    }
    if stats.components != 1 {
        return Err(format!("{} components, expected 1", stats.components));
    }
    if !(stats.signed_volume_mm3 > 0.0) {
        return Err(format!("non-positive volume {}", stats.signed_volume_mm3));
    }
    Ok(())
}

fn build_municipality(
    row: &RecordRow,
    shorelines: &HashMap<String, Polyline2D>,
    derived: Option<&DerivedRow>,
    config: &Config,
) -> Result<(MunicipalityOutput, Vec<Artifact>), String> {
    let mut row = row.clone();
    let mut derived_fields = Vec::new();
    if let Some(d) = derived {
        row.builtup_fraction = d.builtup_fraction;
        row.slope_percent = d.slope_percent;
        derived_fields = vec!["builtup_fraction".to_string(), "slope_percent".to_string()];
    }
    if row.name == SERVING_DIR {
        return Err(format!("`{SERVING_DIR}` is reserved for the shared plate"));
    }
    let line = shorelines
        .get(&row.name)
        .cloned()
        .ok_or_else(|| RecordError::MissingShoreline(row.name.clone()).to_string())?;
    let record = row.into_record(line).map_err(|e| e.to_string())?;
    let specs = encode_all(&record, &config.encoder).map_err(|e| e.to_string())?;
    let fab = &config.fabrication;
    let err = |e: crate::mesher::VesselMeshError| e.to_string();
    let dir = record.name.as_str();
    let mut art = Vec::new();
    let a = &mut art;

    let mug = vec![solid(
        dir,
        "mug.stl",
        FileRole::Body,
        &mug_mesh(&specs.mug, config.encoder.perforation_radius, fab).map_err(err)?,
        i64::from(specs.mug.perforation_count),
        a,
    )?];
    let jug = vec![
        solid(dir, "jug.stl", FileRole::Body, &jug_mesh(&specs.jug, fab).map_err(err)?, 0, a)?,
        solid(dir, "jug_concrete.stl", FileRole::Concrete, &jug_concrete_mesh(&specs.jug, fab).map_err(err)?, 0, a)?,
    ];
    let deep_plate = vec![
        solid(dir, "deep_plate.stl", FileRole::Body, &deep_plate_mesh(&specs.deep_plate, fab).map_err(err)?, 0, a)?,
        solid(dir, "deep_plate_uncut.stl", FileRole::Uncut, &deep_plate_uncut_mesh(&specs.deep_plate, fab).map_err(err)?, 0, a)?,
    ];
    let mut small_plate = vec![solid(
        dir,
        "small_plate.stl",
        FileRole::Body,
        &segment_plate_mesh(&specs.small_plate, fab).map_err(err)?,
        0,
        a,
    )?];
    if let Some(c) = segment_plate_concrete_mesh(&specs.small_plate, fab).map_err(err)? {
        small_plate.push(solid(dir, "small_plate_concrete.stl", FileRole::Concrete, &c, 0, a)?);
    }
    let flat = &specs.flat_plate;
    let mut flat_plate = vec![solid(dir, "flat_plate.stl", FileRole::Body, &flat_plate_mesh(flat, fab).map_err(err)?, 0, a)?];
    a.push(Artifact {
        file: "flat_plate_glass.svg",
        bytes: export_svg_outline(&flat.glass_outline, flat.frame).into_bytes(),
    });
    flat_plate.push(FileEntry {
        path: format!("{dir}/flat_plate_glass.svg"),
        role: FileRole::Glass,
        stats: None,
    });

    let output = MunicipalityOutput {
        record,
        derived_fields,
        specs,
        files: VesselFiles {
            mug,
            jug,
            deep_plate,
            small_plate,
            flat_plate,
        },
    };
    Ok((output, art))
}

fn build_serving(members: &[&MunicipalityRecord], config: &Config) -> Result<(ServingOutput, Vec<Artifact>), String> {
    let spec = encode_serving_plate(members, &config.encoder).map_err(|e| e.to_string())?;
    let fab = &config.fabrication;
    let mut art = Vec::new();
    let body = segment_plate_mesh(&spec.plate, fab).map_err(|e| e.to_string())?;
    let mut files = vec![solid(SERVING_DIR, "serving_plate.stl", FileRole::Body, &body, 0, &mut art)?];
    if let Some(c) = segment_plate_concrete_mesh(&spec.plate, fab).map_err(|e| e.to_string())? {
        files.push(solid(SERVING_DIR, "serving_plate_concrete.stl", FileRole::Concrete, &c, 0, &mut art)?);
    }
    Ok((ServingOutput { spec, files }, art))
}
