//! Re-checks a generated tree against its manifest.

use std::path::Path;

use super::generate::check_solid;
use super::{read_manifest, PipelineError};
use crate::config::Config;
use crate::encoder::SegmentPlateSpec;
use crate::mesher::{
    export_stl, jug_shell, mesh_stats, parse_stl, FabricationConfig, MeshStats, PIE_SEGMENTS_PER_TURN,
};
use crate::report::{FileEntry, FileRole};

/// Relative tolerance for volumes recorded with six significant digits.
const VOLUME_RTOL: f64 = 2e-5;
/// Relative tolerance of a concrete share against its encoded fraction.
const FRACTION_RTOL: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub file: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub files_checked: usize,
    pub problems: Vec<Problem>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.problems.is_empty()
    }

    pub fn exit_code(&self) -> u8 {
        if self.is_ok() {
            super::EXIT_OK
        } else {
            super::EXIT_PARTIAL
        }
    }

    fn problem(&mut self, file: &str, message: impl Into<String>) {
        self.problems.push(Problem {
            file: file.to_string(),
            message: message.into(),
        });
    }
}

pub fn validate_tree(out: &Path) -> Result<ValidationReport, PipelineError> {
    let manifest = read_manifest(out)?;
    let manifest_path = out.join(super::MANIFEST_FILE);
    let config = Config::from_snapshot(&manifest.config, manifest.config_defaulted.clone())
        .map_err(|e| super::input_error(&manifest_path, e))?;
    let fab = &config.fabrication;
    let mut report = ValidationReport::default();

    for m in &manifest.municipalities {
        let v = &m.vessels;
        let cuts = i64::from(v.mug.spec.perforation_count);
        if v.mug.spec.perforation_count != m.record.values.reedbed_cuts {
            report.problem(&m.name, "mug perforations differ from the recorded reedbed cuts");
        }
        check_files(out, &v.mug.files, cuts, &mut report);
        for files in [&v.jug.files, &v.deep_plate.files, &v.small_plate.files, &v.flat_plate.files] {
            check_files(out, files, 0, &mut report);
        }

        let jug = &v.jug.spec;
        let cavity = jug_shell(jug, fab).cavity_volume();
        for f in concrete(&v.jug.files) {
            let volume = f.stats.as_ref().map_or(0.0, |s| s.signed_volume_mm3);
            check_fraction(&mut report, &f.path, volume / cavity, jug.concrete_fraction);
        }
        check_segment(out, &v.small_plate.spec, &v.small_plate.files, fab, &mut report);
    }
    if let Some(sv) = &manifest.serving_plate {
        check_files(out, &sv.vessel.files, 0, &mut report);
        check_segment(out, &sv.vessel.spec.plate, &sv.vessel.files, fab, &mut report);
    }
    Ok(report)
}

fn concrete(files: &[FileEntry]) -> impl Iterator<Item = &FileEntry> {
    files.iter().filter(|f| f.role == FileRole::Concrete)
}

fn check_fraction(report: &mut ValidationReport, file: &str, measured: f64, expected: f64) {
    let ok = if expected == 0.0 {
        measured == 0.0
    } else {
        ((measured - expected) / expected).abs() <= FRACTION_RTOL
    };
    if !ok {
        report.problem(file, format!("concrete share {measured:.6} differs from encoded fraction {expected:.6}"));
    }
}

fn check_segment(out: &Path, spec: &SegmentPlateSpec, files: &[FileEntry], fab: &FabricationConfig, report: &mut ValidationReport) {
    let segments: Vec<&FileEntry> = concrete(files).collect();
    if spec.suppressed {
        for f in segments {
            report.problem(&f.path, "segment is suppressed but a concrete file is listed");
        }
        return;
    }
    if segments.is_empty() && spec.segment_angle > 0.0 {
        report.problem(&out.display().to_string(), format!("missing concrete segment for a {}° plate segment", spec.segment_angle));
    }
    // Full faceted disc of the segment's radius and thickness.
    let r = spec.diameter / 2.0 - fab.plate_rim;
    let n = PIE_SEGMENTS_PER_TURN as f64;
    let disc = 0.5 * n * r * r * (std::f64::consts::TAU / n).sin() * fab.concrete_segment_thickness;
    for f in segments {
        let volume = f.stats.as_ref().map_or(0.0, |s| s.signed_volume_mm3);
        check_fraction(report, &f.path, volume / disc, spec.segment_angle / 360.0);
    }
}

fn check_files(out: &Path, files: &[FileEntry], genus: i64, report: &mut ValidationReport) {
    for f in files {
        report.files_checked += 1;
        let path = out.join(&f.path);
        let bytes = match std::fs::read(&path) {
            Ok(b) => b,
            Err(e) => {
                report.problem(&f.path, format!("cannot read: {e}"));
                continue;
            }
        };
        if f.role == FileRole::Glass {
            let text = String::from_utf8_lossy(&bytes);
            if !text.contains("<svg") || text.matches("<path").count() != 1 {
                report.problem(&f.path, "not a single-path SVG outline");
            }
            continue;
        }
        let mesh = match parse_stl(&bytes) {
            Ok(m) => m,
            Err(e) => {
                report.problem(&f.path, format!("corrupt STL: {e}"));
                continue;
            }
        };
        if export_stl(&mesh).ok().as_deref() != Some(&bytes[..]) {
            report.problem(&f.path, "STL does not round-trip byte for byte");
        }
        let stats = mesh_stats(&mesh);
        if !mesh.is_empty() {
            if let Err(e) = check_solid(&stats, genus) {
                report.problem(&f.path, e);
            }
        } else if f.role != FileRole::Concrete {
            report.problem(&f.path, "empty mesh");
        }
        if let Some(recorded) = &f.stats {
            compare_stats(report, &f.path, &stats, recorded);
        }
    }
}

fn compare_stats(report: &mut ValidationReport, file: &str, now: &MeshStats, recorded: &MeshStats) {
    if (now.vertices, now.faces, now.genus) != (recorded.vertices, recorded.faces, recorded.genus) {
        report.problem(file, "topology differs from the manifest");
    }
    let (a, b) = (now.signed_volume_mm3, recorded.signed_volume_mm3);
    if (a - b).abs() > VOLUME_RTOL * b.abs().max(1e-9) {
        report.problem(file, format!("volume {a} differs from manifest {b}"));
    }
}
