use std::path::Path;
use std::process::{Command, Output};

use strata::network::{check_admissible, AdmissibleGraph};
use tempfile::TempDir;

const CUBIC: &str = "-1,0;0,0;0,0";
const GENERIC: &str = "-1,0;0,0.1;0,0";

fn strata(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("STRATA_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Runs the command in two fresh directories and compares the named files.
fn assert_repeatable(args: &[&str], files: &[&str]) {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let (ra, rb) = (strata(a.path(), args), strata(b.path(), args));
    assert!(ra.status.success(), "{}", String::from_utf8_lossy(&ra.stderr));
    assert_eq!(ra.stdout, rb.stdout);
    for f in files {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f} differs between runs");
    }
}

#[test]
fn trace_writes_structure() {
    let dir = TempDir::new().unwrap();
    let o = strata(dir.path(), &["trace", "--k", "3", "--coeffs", CUBIC, "--orientation", "h"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("4 directions, 4 half-planes"));
    let s: serde_json::Value = serde_json::from_slice(&read(dir.path(), "structure.json")).unwrap();
    assert_eq!(s["shorts"].as_array().unwrap().len(), 1);
    let svg = String::from_utf8(read(dir.path(), "structure.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(!svg.contains("href"));
}

#[test]
fn both_orientations_get_suffixed_files() {
    let dir = TempDir::new().unwrap();
    let o = strata(dir.path(), &["trace", "--k", "2", "--coeffs", "-1,0;0,0", "--orientation", "both"]);
    assert!(o.status.success());
    for f in ["structure_h.json", "structure_v.json", "structure_h.svg", "structure_v.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let code = |args: &[&str]| strata(dir.path(), args).status.code();
    assert_eq!(code(&["trace", "--k", "2", "--coeffs", "0,0;1,0"]), Some(2));
    assert_eq!(code(&["trace", "--k", "2", "--coeffs", "1,0"]), Some(2));
    assert_eq!(code(&["trace", "--k", "2", "--coeffs", "a,b;1,0"]), Some(2));
    assert_eq!(code(&["stasheff", "--n", "3", "--weight", "1,0,0,0"]), Some(2));
    assert_eq!(code(&["stasheff", "--n", "13"]), Some(2));
    assert_eq!(code(&["--capture", "-1", "selftest"]), Some(2));
    // the polynomial family has no admissible graph
    assert_eq!(code(&["graph", "--k", "3", "--coeffs", CUBIC, "--family", "polynomial"]), Some(2));
    // a one-step budget cannot finish a trace
    assert_eq!(code(&["--max-steps", "1", "trace", "--k", "2", "--coeffs", "-1,0;0,0"]), Some(3));
}

#[test]
fn cubic_fixture_has_short_both_ways() {
    let dir = TempDir::new().unwrap();
    let o = strata(dir.path(), &["graph", "--k", "3", "--coeffs", CUBIC]);
    assert!(o.status.success());
    let flags: serde_json::Value = serde_json::from_slice(&read(dir.path(), "has_short.json")).unwrap();
    assert_eq!(flags, serde_json::json!({"horizontal": true, "vertical": true}));
    for f in ["gh.json", "gv.json"] {
        let g: AdmissibleGraph = serde_json::from_slice(&read(dir.path(), f)).unwrap();
        assert!(check_admissible(&g), "{f}");
    }
}

#[test]
fn generic_fixture_lacks_short_somewhere() {
    let dir = TempDir::new().unwrap();
    assert!(strata(dir.path(), &["diagram", "--k", "3", "--coeffs", GENERIC]).status.success());
    let flags: serde_json::Value = serde_json::from_slice(&read(dir.path(), "has_short.json")).unwrap();
    assert!(flags["horizontal"] == false || flags["vertical"] == false);
    let gamma: serde_json::Value = serde_json::from_slice(&read(dir.path(), "gamma_h.json")).unwrap();
    assert_eq!(gamma["diagram"]["n_plus_1"], 5);
}

#[test]
fn stasheff_queries() {
    let dir = TempDir::new().unwrap();
    let run = |args: &[&str]| stdout(&strata(dir.path(), args));
    assert_eq!(run(&["stasheff", "--n", "4", "--count"]).trim(), "5");
    assert_eq!(run(&["stasheff", "--n", "6", "--count"]).trim(), "42");
    assert_eq!(run(&["stasheff", "--n", "4", "--list"]).lines().count(), 5);
    assert!(run(&["stasheff", "--n", "4", "--flips"]).contains("5 vertices, 5 edges"));
    assert!(run(&["stasheff", "--n", "3", "--weight", "0,0,0,0"]).starts_with("degenerate, apex face"));
}

#[test]
fn seed_flag_and_env_agree() {
    let dir = TempDir::new().unwrap();
    let with_flag = strata(dir.path(), &["--seed", "11", "stasheff", "--n", "5", "--random", "3"]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_strata"))
        .args(["stasheff", "--n", "5", "--random", "3"])
        .env("STRATA_SEED", "11")
        .output()
        .unwrap();
    let other = strata(dir.path(), &["--seed", "12", "stasheff", "--n", "5", "--random", "3"]);
    assert_eq!(with_flag.stdout, with_env.stdout);
    assert_ne!(with_flag.stdout, other.stdout);
}

#[test]
fn config_file_sets_defaults() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "seed = 11\n").unwrap();
    let a = strata(dir.path(), &["--config", cfg.to_str().unwrap(), "stasheff", "--n", "5", "--random", "3"]);
    let b = strata(dir.path(), &["--seed", "11", "stasheff", "--n", "5", "--random", "3"]);
    assert_eq!(a.stdout, b.stdout);
    std::fs::write(&cfg, "sede = 11\n").unwrap();
    let bad = strata(dir.path(), &["--config", cfg.to_str().unwrap(), "selftest"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn scan_rejects_malformed_specs() {
    let dir = TempDir::new().unwrap();
    let spec = String::from_utf8(strata(dir.path(), &["scan", "--demo", "--print-spec"]).stdout).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&spec).unwrap();
    v["nx"] = 1.into();
    v["ny"] = 1.into();
    let path = dir.path().join("tiny.json");
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(strata(dir.path(), &["scan", "--spec", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(strata(dir.path(), &["scan", "--spec", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn small_scan_finds_a_wall() {
    let dir = TempDir::new().unwrap();
    let spec = String::from_utf8(strata(dir.path(), &["scan", "--demo", "--print-spec"]).stdout).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&spec).unwrap();
    v["nx"] = 7.into();
    v["ny"] = 7.into();
    let path = dir.path().join("spec.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let args = ["scan", "--spec", path.to_str().unwrap()];
    let o = strata(dir.path(), &args);
    assert!(o.status.success());
    let walls: serde_json::Value = serde_json::from_slice(&read(dir.path(), "walls.json")).unwrap();
    assert!(!walls["refined"].as_array().unwrap().is_empty());
    assert!(read(dir.path(), "wallmap.ppm").starts_with(b"P6\n56 56\n"));
    assert_repeatable(&args, &["wallmap.csv", "wallmap.ppm", "walls.json"]);
}

#[test]
fn every_command_is_repeatable() {
    assert_repeatable(&["trace", "--k", "3", "--coeffs", GENERIC, "--orientation", "both"], &[
        "structure_h.json",
        "structure_v.json",
        "structure_h.svg",
        "structure_v.svg",
    ]);
    assert_repeatable(&["graph", "--k", "3", "--coeffs", CUBIC], &[
        "gh.json",
        "gv.json",
        "g_ext.json",
        "g_ext.svg",
        "has_short.json",
    ]);
    assert_repeatable(&["diagram", "--k", "3", "--coeffs", GENERIC], &["gamma_h.json", "gamma_v.json", "has_short.json"]);
    assert_repeatable(&["--seed", "3", "stasheff", "--n", "6", "--random", "5", "--flips"], &[]);
    assert_repeatable(&["selftest"], &[]);
}

#[test]
fn bundled_demo_scan() {
    let dir = TempDir::new().unwrap();
    let o = strata(dir.path(), &["scan", "--demo"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let cells: usize = text
        .lines()
        .find(|l| l.starts_with("horizontal:"))
        .and_then(|l| l.split_whitespace().nth(1))
        .and_then(|n| n.parse().ok())
        .unwrap();
    assert!(cells >= 2, "{text}");
    let walls: serde_json::Value = serde_json::from_slice(&read(dir.path(), "walls.json")).unwrap();
    assert!(!walls["refined"].as_array().unwrap().is_empty());
}
