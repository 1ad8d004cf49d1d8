use std::path::Path;
use std::process::Command;

use crackfem::config::{preset, ProblemConfig, PRESETS};
use crackfem::study::{run_convergence_study, run_single};
use crackfem::Error;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crackfem"))
}

#[test]
fn every_preset_round_trips_through_toml() {
    for p in PRESETS {
        let cfg = preset(p.name).unwrap();
        let again = ProblemConfig::from_toml(&cfg.to_toml(), Path::new("roundtrip.toml")).unwrap();
        assert_eq!(cfg.to_toml(), again.to_toml(), "{}", p.name);
        assert_eq!(cfg.name, p.name);
    }
}

#[test]
fn bad_configs_are_rejected() {
    let good = preset("network-coarse").unwrap().to_toml();
    let cases = [
        good.replace("schema_version = 1", "schema_version = 2"),
        good.replace("divisions = 8", "divisions = 0"),
        good.replace("method = \"direct\"", "method = \"lu\""),
        good.replace("a1 = 1.0", "a1 = -1.0"),
        format!("{good}\nunknown_key = 3\n"),
    ];
    for text in cases {
        assert!(ProblemConfig::from_toml(&text, Path::new("bad.toml")).is_err(), "{text}");
    }
    assert!(matches!(preset("nope"), Err(Error::UnknownPreset(_))));
}

#[test]
fn runs_are_deterministic_byte_for_byte() {
    let cfg = preset("network-coarse").unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_single(&cfg, Some(a.path())).unwrap();
    run_single(&cfg, Some(b.path())).unwrap();
    for name in ["mesh.txt", "field.txt", "solution.vtk", "kirchhoff.csv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name}");
    }
    assert!(!a.path().join("norms.csv").exists());
}

#[test]
fn empty_crack_list_is_a_plain_poisson_solve() {
    let mut cfg = preset("poisson-baseline").unwrap();
    assert!(cfg.crack.graph.is_empty());
    cfg.mesh.divisions = 16;
    let r = run_single(&cfg, None).unwrap();
    assert!(r.segments.is_empty() && r.kirchhoff.is_empty());
    assert_eq!(r.h, r.h_gamma);
    assert!(r.errors.unwrap().l2 < 5e-3);
}

#[test]
fn study_requires_an_exact_solution() {
    let mut cfg = preset("network-coarse").unwrap();
    cfg.study = Some(crackfem::config::StudySpec { levels: vec![4, 8, 16] });
    assert!(run_convergence_study(&cfg, None).is_err());
}

#[test]
fn cli_lists_and_shows_presets() {
    let out = bin().args(["presets", "list"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for p in PRESETS {
        assert!(text.contains(p.name));
    }
    let out = bin().args(["presets", "show", "radial-local"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), preset_text("radial-local"));
    let out = bin().args(["presets", "show", "missing"]).output().unwrap();
    assert!(!out.status.success());
}

fn preset_text(name: &str) -> &'static str {
    PRESETS.iter().find(|p| p.name == name).unwrap().toml
}

#[test]
fn cli_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "network-coarse", "--threads", "2", "--solver", "cg", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kirchhoff: max |imbalance|"));
    assert!(text.contains("node 2 (degree 4)") && text.contains("node 3 (degree 3)"), "{text}");
    for name in ["mesh.txt", "field.txt", "solution.vtk", "kirchhoff.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }

    // A config file on disk works the same as a preset name.
    let file = dir.path().join("plane.toml");
    std::fs::write(&file, preset_text("network-plane")).unwrap();
    let out = bin().arg("run").arg(&file).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("errors: L2"));
}

#[test]
fn cli_study_writes_rates() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("small.toml");
    let text = preset_text("poisson-baseline").replace("levels = [8, 16, 32, 64, 128]", "levels = [4, 8, 16]");
    assert_ne!(text, preset_text("poisson-baseline"));
    std::fs::write(&file, text).unwrap();
    let out = bin().arg("study").arg(&file).arg("--out").arg(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let slopes = std::fs::read_to_string(dir.path().join("slopes.csv")).unwrap();
    assert!(slopes.starts_with("norm,slope\nl2,"));
    let rates = std::fs::read_to_string(dir.path().join("rates.csv")).unwrap();
    assert_eq!(rates.lines().count(), 4);
    for k in 0..3 {
        assert!(dir.path().join(format!("level_{k}_norms.csv")).exists());
    }
}

#[test]
fn cli_rejects_bad_arguments() {
    assert!(!bin().args(["run", "no-such-preset"]).output().unwrap().status.success());
    assert!(!bin().args(["run", "network-coarse", "--solver", "lu"]).output().unwrap().status.success());
}
