//! File-level commands: derive, generate, validate and report.

mod derive;
mod generate;
mod validate;

use std::fmt::Display;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::report::{parse_manifest, render_booklet, Manifest, ManifestError};

pub use derive::{derive, derive_rows, read_derived, write_derived, DeriveRequest, DerivedRow, Source};
pub use generate::{generate, GenerateRequest, GenerateSummary, SERVING_DIR};
pub use validate::{validate_tree, Problem, ValidationReport};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const BOOKLET_FILE: &str = "booklet.md";

pub const EXIT_OK: u8 = 0;
/// Some municipality failed or validation found problems.
pub const EXIT_PARTIAL: u8 = 1;
/// Unreadable or malformed input, or an invalid selection.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Selection(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: io::Error },
    #[error("{0}")]
    Manifest(#[from] ManifestError),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl PipelineError {
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Input { .. } | PipelineError::Selection(_) => EXIT_INPUT,
            _ => EXIT_PARTIAL,
        }
    }
}

pub(crate) fn input_error(path: &Path, message: impl Display) -> PipelineError {
    PipelineError::Input {
        path: path.display().to_string(),
        message: message.to_string(),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|e| input_error(path, e))
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    write_atomic(path, bytes).map_err(|source| PipelineError::Write {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_manifest(out: &Path) -> Result<Manifest, PipelineError> {
    let path = out.join(MANIFEST_FILE);
    parse_manifest(&read_text(&path)?).map_err(|e| input_error(&path, e))
}

/// Rewrites the booklet from the manifest in `out`.
pub fn report(out: &Path) -> Result<PathBuf, PipelineError> {
    let manifest = read_manifest(out)?;
    let path = out.join(BOOKLET_FILE);
    write_file(&path, render_booklet(&manifest).as_bytes())?;
    Ok(path)
}
