//! `tableware`: derive, generate, validate and report.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tableware::config::Config;
use tableware::pipeline::{self, DeriveRequest, GenerateRequest, PipelineError, EXIT_OK};

#[derive(Parser)]
#[command(name = "tableware", version, about = "Turn lake-shore ecology records into tableware meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute built-up fraction and slope per municipality from rasters.
    Derive(DeriveArgs),
    /// Encode records into meshes, outlines, a manifest and a booklet.
    Generate(GenerateArgs),
    /// Re-check a generated tree against its manifest.
    Validate(OutArgs),
    /// Rewrite the booklet from a manifest.
    Report(OutArgs),
}

#[derive(Args)]
struct DeriveArgs {
    /// Elevation model, ESRI ASCII grid.
    #[arg(long)]
    dem: PathBuf,
    /// Built-up scores 0-100, ESRI ASCII grid.
    #[arg(long)]
    builtup: PathBuf,
    /// Municipality polygons, GeoJSON with a `name` property.
    #[arg(long)]
    zones: PathBuf,
    /// Slope profile lines, GeoJSON with a `name` property.
    #[arg(long)]
    profiles: PathBuf,
    /// Elevation of the former lakebed edge, meters.
    #[arg(long, default_value_t = 113.0)]
    lakebed_level: f64,
    /// CSV output; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Municipality records CSV.
    records: PathBuf,
    /// Shoreline LineStrings, GeoJSON with a `name` property.
    shorelines: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Flat TOML configuration.
    #[arg(long, env = "TABLEWARE_CONFIG")]
    config: Option<PathBuf>,
    /// CSV from `derive`, overriding builtup_fraction and slope_percent.
    #[arg(long)]
    derived: Option<PathBuf>,
    /// Only these municipalities (comma separated or repeated).
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<String>>,
    /// Municipalities averaged on the serving plate.
    #[arg(long, value_delimiter = ',')]
    serving_subset: Option<Vec<String>>,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code)
}

fn load_config(path: Option<&Path>) -> Result<Config, PipelineError> {
    let Some(path) = path else {
        return Ok(Config::defaults());
    };
    let text = std::fs::read_to_string(path).map_err(|e| input(path, e))?;
    Config::parse(&text).map_err(|e| input(path, e))
}

fn input(path: &Path, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn run(command: Command) -> Result<u8, PipelineError> {
    match command {
        Command::Derive(a) => {
            let rows = pipeline::derive(&DeriveRequest {
                dem: a.dem,
                builtup: a.builtup,
                zones: a.zones,
                profiles: a.profiles,
                lakebed_level: a.lakebed_level,
            })?;
            let csv = pipeline::write_derived(&rows);
            match a.out {
                Some(path) => {
                    pipeline::write_atomic(&path, csv.as_bytes()).map_err(|source| PipelineError::Write {
                        path: path.display().to_string(),
                        source,
                    })?;
                    eprintln!("derived {} municipalities -> {}", rows.len(), path.display());
                }
                None => print!("{csv}"),
            }
            Ok(EXIT_OK)
        }
        Command::Generate(a) => {
            if a.jobs == Some(0) {
                return Err(PipelineError::Selection("--jobs must be at least 1".into()));
            }
            let summary = pipeline::generate(&GenerateRequest {
                config: load_config(a.config.as_deref())?,
                records: a.records,
                shorelines: a.shorelines,
                derived: a.derived,
                out: a.out.clone(),
                only: a.only,
                serving_subset: a.serving_subset,
                jobs: a.jobs,
            })?;
            let m = &summary.manifest;
            for f in &m.failures {
                eprintln!("failed: {}: {}", f.name, f.error);
            }
            eprintln!(
                "{} municipalities, {} failed, {} files -> {}",
                m.municipalities.len(),
                m.failures.len(),
                summary.files_written,
                a.out.display()
            );
            Ok(summary.exit_code())
        }
        Command::Validate(a) => {
            let report = pipeline::validate_tree(&a.out)?;
            for p in &report.problems {
                eprintln!("{}: {}", p.file, p.message);
            }
            eprintln!("{} files checked, {} problems", report.files_checked, report.problems.len());
            Ok(report.exit_code())
        }
        Command::Report(a) => {
            let path = pipeline::report(&a.out)?;
            eprintln!("wrote {}", path.display());
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use tableware::pipeline::EXIT_INPUT;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bad_config_is_an_input_error() {
        let dir = std::env::temp_dir().join(format!("tableware-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.toml");
        std::fs::write(&path, "no_such_key = 1\n").unwrap();
        let err = load_config(Some(&path)).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INPUT);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
