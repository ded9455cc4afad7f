use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};
use tableware::fixture::{self, FixturePaths};

fn tableware(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tableware"))
        .args(args)
        .env_remove("TABLEWARE_CONFIG")
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn setup() -> (tempfile::TempDir, FixturePaths) {
    let dir = tempfile::tempdir().unwrap();
    let paths = fixture::write_fixture(&dir.path().join("in")).unwrap();
    (dir, paths)
}

fn generate(paths: &FixturePaths, out: &Path, extra: &[&str]) -> Output {
    let subset = fixture::dinner_subset().join(",");
    let mut args = vec![
        "generate",
        s(&paths.records),
        s(&paths.shorelines),
        "--out",
        s(out),
        "--serving-subset",
        &subset,
    ];
    args.extend_from_slice(extra);
    tableware(&args)
}

fn tree_hash(root: &Path) -> String {
    let mut files = Vec::new();
    fn walk(dir: &Path, files: &mut Vec<PathBuf>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                walk(&p, files);
            } else {
                files.push(p);
            }
        }
    }
    walk(root, &mut files);
    files.sort();
    let mut h = Sha256::new();
    for f in files {
        h.update(f.strip_prefix(root).unwrap().to_string_lossy().as_bytes());
        h.update([0]);
        h.update(std::fs::read(&f).unwrap());
    }
    format!("{:x}", h.finalize())
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn fixture_generates_complete_sets_and_validates() {
    let (dir, paths) = setup();
    let out = dir.path().join("out");
    let o = generate(&paths, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for r in fixture::records() {
        let d = out.join(&r.name);
        for f in ["mug.stl", "jug.stl", "jug_concrete.stl", "deep_plate.stl", "deep_plate_uncut.stl", "small_plate.stl", "flat_plate.stl", "flat_plate_glass.svg"] {
            assert!(d.join(f).is_file(), "{}/{f}", r.name);
        }
        let suppressed = r.name == "Aszófő";
        assert_eq!(d.join("small_plate_concrete.stl").exists(), !suppressed, "{}", r.name);
    }
    assert!(out.join("serving_plate/serving_plate.stl").is_file());
    assert!(out.join("serving_plate/serving_plate_concrete.stl").is_file());
    assert!(out.join("manifest.json").is_file());

    let v = tableware(&["validate", "--out", s(&out)]);
    assert_eq!(v.status.code(), Some(0), "{}", stderr(&v));

    let booklet = std::fs::read(out.join("booklet.md")).unwrap();
    std::fs::remove_file(out.join("booklet.md")).unwrap();
    let r = tableware(&["report", "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(std::fs::read(out.join("booklet.md")).unwrap(), booklet);
}

#[test]
fn reruns_are_byte_identical() {
    let (dir, paths) = setup();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(generate(&paths, &a, &["--jobs", "1"]).status.code(), Some(0));
    assert_eq!(generate(&paths, &b, &["--jobs", "4"]).status.code(), Some(0));
    assert_eq!(tree_hash(&a), tree_hash(&b));
    let before = tree_hash(&a);
    assert_eq!(generate(&paths, &a, &["--jobs", "2"]).status.code(), Some(0));
    assert_eq!(tree_hash(&a), before);
}

#[test]
fn bad_record_fails_alone() {
    let (dir, paths) = setup();
    let text = std::fs::read_to_string(&paths.records).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let i = lines.iter().position(|l| l.starts_with("Zánka,")).unwrap();
    let mut cells: Vec<&str> = lines[i].split(',').collect();
    cells[4] = "0";
    cells[5] = "0";
    lines[i] = cells.join(",");
    std::fs::write(&paths.records, lines.join("\n") + "\n").unwrap();

    let out = dir.path().join("out");
    let o = generate(&paths, &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Zánka"));
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    let m = tableware::report::parse_manifest(&manifest).unwrap();
    assert_eq!(m.municipalities.len(), 10);
    assert_eq!(m.failures.len(), 1);
    assert_eq!(m.failures[0].name, "Zánka");
    assert!(!out.join("Zánka").exists());
    let booklet = std::fs::read_to_string(out.join("booklet.md")).unwrap();
    for r in fixture::records() {
        assert!(booklet.contains(&r.name), "{}", r.name);
    }
    assert_eq!(tableware(&["validate", "--out", s(&out)]).status.code(), Some(0));
}

#[test]
fn unknown_selection_is_an_input_error() {
    let (dir, paths) = setup();
    let out = dir.path().join("out");
    let o = tableware(&["generate", s(&paths.records), s(&paths.shorelines), "--out", s(&out), "--only", "Zánka,Atlantis"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Atlantis"));
    assert!(!out.exists());
    let o = tableware(&["generate", s(&paths.records), s(&paths.shorelines), "--out", s(&out), "--only", "Zánka", "--serving-subset", "Tihany"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tableware(&["generate", "missing.csv", s(&paths.shorelines), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn only_limits_the_output() {
    let (dir, paths) = setup();
    let out = dir.path().join("out");
    let o = tableware(&["generate", s(&paths.records), s(&paths.shorelines), "--out", s(&out), "--only", "Tihany,Zánka"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = tableware::report::parse_manifest(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let names: Vec<&str> = m.municipalities.iter().map(|m| m.name.as_str()).collect();
    // Input order, not selection order.
    assert_eq!(names, ["Zánka", "Tihany"]);
    assert_eq!(m.serving_plate.unwrap().vessel.spec.members, ["Zánka", "Tihany"]);
}

#[test]
fn truncated_stl_is_named() {
    let (dir, paths) = setup();
    let out = dir.path().join("out");
    assert_eq!(generate(&paths, &out, &[]).status.code(), Some(0));
    let victim = out.join("Tihany/mug.stl");
    let bytes = std::fs::read(&victim).unwrap();
    std::fs::write(&victim, &bytes[..bytes.len() - 1]).unwrap();
    let v = tableware(&["validate", "--out", s(&out)]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stderr(&v).contains("Tihany/mug.stl"), "{}", stderr(&v));
}

#[test]
fn edited_fraction_is_detected() {
    let (dir, paths) = setup();
    let out = dir.path().join("out");
    assert_eq!(generate(&paths, &out, &[]).status.code(), Some(0));
    let path = out.join("manifest.json");
    let mut m: serde_like::Value = serde_like::from_str(&std::fs::read_to_string(&path).unwrap());
    m.set_jug_fraction(2, 0.9);
    std::fs::write(&path, m.to_string()).unwrap();
    let v = tableware(&["validate", "--out", s(&out)]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stderr(&v).contains("Badacsonytomaj/jug_concrete.stl"), "{}", stderr(&v));
}

/// Minimal manifest editing through the library's own types.
mod serde_like {
    use tableware::report::{manifest_json, parse_manifest, Manifest};

    pub struct Value(Manifest);

    pub fn from_str(text: &str) -> Value {
        Value(parse_manifest(text).unwrap())
    }

    impl Value {
        pub fn set_jug_fraction(&mut self, index: usize, f: f64) {
            self.0.municipalities[index].vessels.jug.spec.concrete_fraction = f;
        }
    }

    impl std::fmt::Display for Value {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str(&manifest_json(&self.0))
        }
    }
}

#[test]
fn missing_manifest_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(tableware(&["validate", "--out", s(dir.path())]).status.code(), Some(2));
    assert_eq!(tableware(&["report", "--out", s(dir.path())]).status.code(), Some(2));
}

#[test]
fn derive_then_generate_with_derived_values() {
    let (dir, paths) = setup();
    let csv = dir.path().join("derived.csv");
    let o = tableware(&[
        "derive", "--dem", s(&paths.dem), "--builtup", s(&paths.builtup), "--zones", s(&paths.zones), "--profiles", s(&paths.profiles), "--out", s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = tableware::pipeline::read_derived(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    for (row, rec) in rows.iter().zip(fixture::records()) {
        assert!((row.slope_percent - rec.slope).abs() < 1e-9);
        assert!((row.builtup_fraction - rec.builtup_fraction).abs() < 1e-12);
    }

    let out = dir.path().join("out");
    let o = generate(&paths, &out, &["--derived", s(&csv)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = tableware::report::parse_manifest(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert!(m.municipalities.iter().all(|e| e.record.derived_fields == ["builtup_fraction", "slope_percent"]));
}

#[test]
fn derive_errors_exit_two_without_output() {
    let (dir, paths) = setup();
    let csv = dir.path().join("derived.csv");
    let o = tableware(&[
        "derive", "--dem", "no-such.asc", "--builtup", s(&paths.builtup), "--zones", s(&paths.zones), "--profiles", s(&paths.profiles), "--out", s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no-such.asc"));
    assert!(!csv.exists());

    let broken = dir.path().join("broken.asc");
    let text = fixture::DEM_ASC.replacen("ncols", "ncolz", 1);
    std::fs::write(&broken, text).unwrap();
    let o = tableware(&[
        "derive", "--dem", s(&broken), "--builtup", s(&paths.builtup), "--zones", s(&paths.zones), "--profiles", s(&paths.profiles), "--out", s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.asc") && stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn zero_builtup_raster_gives_zero_fractions() {
    let (dir, paths) = setup();
    let zero = dir.path().join("zero.asc");
    let text: String = fixture::BUILTUP_ASC
        .lines()
        .map(|l| {
            if l.starts_with(|c: char| c.is_ascii_alphabetic()) {
                l.to_string()
            } else {
                l.split_whitespace().map(|_| "0").collect::<Vec<_>>().join(" ")
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(&zero, text).unwrap();
    let o = tableware(&["derive", "--dem", s(&paths.dem), "--builtup", s(&zero), "--zones", s(&paths.zones), "--profiles", s(&paths.profiles)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = tableware::pipeline::read_derived(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.builtup_fraction == 0.0));
}

#[test]
fn config_from_environment() {
    let (dir, paths) = setup();
    let cfg = dir.path().join("t.toml");
    std::fs::write(&cfg, "mug_diameter = 90\n").unwrap();
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_tableware"))
        .args(["generate", s(&paths.records), s(&paths.shorelines), "--out", s(&out), "--only", "Zánka"])
        .env("TABLEWARE_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = tableware::report::parse_manifest(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m.config["mug_diameter"], 90.0);
    assert!(!m.config_defaulted.contains(&"mug_diameter".to_string()));
    assert_eq!(m.municipalities[0].vessels.mug.spec.diameter, 90.0);

    std::fs::write(&cfg, "mug_diameter = \"wide\"\n").unwrap();
    let o = tableware(&["generate", s(&paths.records), s(&paths.shorelines), "--out", s(&out), "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
}
