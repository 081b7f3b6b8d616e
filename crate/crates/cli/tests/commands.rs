use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn digifix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digifix"))
        .args(args)
        .env_remove("DIGIFIX_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn gen(dir: &TempDir, family: &str, params: &[&str]) -> PathBuf {
    let path = dir.path().join(format!("{family}{}.json", params.join("_")));
    let mut args = vec!["gen", family];
    args.extend(params);
    args.extend(["-o", path.to_str().unwrap()]);
    let r = json(&digifix(&args));
    assert_eq!(r["command"], "gen");
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn numbers(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn cycle_spectrum() {
    let dir = TempDir::new().unwrap();
    let c7 = gen(&dir, "cycle", &["7"]);
    let r = json(&digifix(&["spectrum", s(&c7)]));
    assert_eq!(numbers(&r["result"]["spectrum"]), [0, 1, 2, 3, 4, 7]);
    assert!(r["input_digest"].as_str().unwrap().starts_with("sha256:"));
    assert!(r["stats"]["maps_enumerated"].as_u64().unwrap() > 0);
}

#[test]
fn presets() {
    let dir = TempDir::new().unwrap();
    let x = gen(&dir, "fig_xexample", &[]);
    let r = json(&digifix(&["rigid", s(&x)]));
    assert_eq!(r["result"]["rigid"], true);
    assert_eq!(r["result"]["size"], 18);

    let sx = gen(&dir, "fig_sexample", &[]);
    let r = json(&digifix(&["spectrum", s(&sx)]));
    let expected: Vec<u64> = (0..=12).chain([15]).collect();
    assert_eq!(numbers(&r["result"]["spectrum"]), expected);

    let r = json(&digifix(&["pull", s(&sx)]));
    assert_eq!(r["result"]["min"], 3);
    assert_eq!(numbers(&r["result"]["excluded"]), [13, 14]);

    let r = json(&digifix(&["lasso", s(&sx)]));
    assert_eq!(r["result"]["certified"], true);

    let cube = gen(&dir, "cube", &[]);
    let r = json(&digifix(&["criterion", s(&cube)]));
    assert_eq!(r["result"]["n_minus_1_in_spectrum"], false);
    assert_eq!(r["result"]["witness"], Value::Null);
}

#[test]
fn map_commands() {
    let dir = TempDir::new().unwrap();
    let c6 = gen(&dir, "cycle", &["6"]);
    let map = dir.path().join("fold.json");
    std::fs::write(&map, r#"{"format":"digifix-map/1","targets":[0,1,2,3,2,1]}"#).unwrap();
    let r = json(&digifix(&["fixset", s(&c6), "--map", s(&map)]));
    assert_eq!(r["result"]["structure"], "connected");
    assert_eq!(numbers(&r["result"]["fixed"]), [0, 1, 2, 3]);

    let flip = dir.path().join("flip.json");
    std::fs::write(&flip, r#"{"format":"digifix-map/1","targets":[0,5,4,3,2,1]}"#).unwrap();
    let r = json(&digifix(&["fixset", s(&c6), "--map", s(&flip)]));
    assert_eq!(r["result"]["structure"], "disconnected");
    assert_eq!(numbers(&r["result"]["antipodal_pair"]), [0, 3]);
    let r = json(&digifix(&["sfix", s(&c6), "--map", s(&flip)]));
    assert_eq!(numbers(&r["result"]["spectrum"]), [0, 2]);
    assert_eq!(r["result"]["class_size"], 6);

    let r = json(&digifix(&["classes", s(&c6)]));
    assert_eq!(r["result"]["count"], 3);
}

#[test]
fn retracts() {
    let dir = TempDir::new().unwrap();
    let i = gen(&dir, "interval", &["-2", "3"]);
    let r = json(&digifix(&["retract", s(&i), "--subset", "0,1,2"]));
    assert_eq!(r["result"]["retract"], true);
    assert_eq!(r["result"]["deformation"], "yes");
    let r = json(&digifix(&["retract", s(&i), "--subset", "0,2"]));
    assert_eq!(r["result"]["retract"], false);

    let c6 = gen(&dir, "cycle", &["6"]);
    let r = json(&digifix(&["retract", s(&c6), "--subset", "0,1,2"]));
    assert_eq!(r["result"]["retract"], true);
    assert_eq!(r["result"]["deformation"], "no");
}

#[test]
fn formats() {
    let dir = TempDir::new().unwrap();
    let i = gen(&dir, "interval", &["0", "1"]);
    let csv = digifix(&["--format", "csv", "spectrum", s(&i)]);
    assert_eq!(
        String::from_utf8(csv.stdout).unwrap(),
        "key,value\nsize,2\nspectrum,0\nspectrum,1\nspectrum,2\n"
    );
    let text = digifix(&["--format", "text", "spectrum", s(&i)]);
    assert!(String::from_utf8(text.stdout).unwrap().contains("spectrum  {0,1,2}"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(digifix(&[]).status.code(), Some(1));
    assert_eq!(digifix(&["spectrum"]).status.code(), Some(1));
    assert_eq!(digifix(&["--version"]).status.code(), Some(0));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"format":"digifix-image/1","adjacency":{"kind":"weird"}}"#).unwrap();
    assert_eq!(digifix(&["spectrum", s(&bad)]).status.code(), Some(2));
    assert_eq!(digifix(&["gen", "cycle", "0", "-o", s(&bad)]).status.code(), Some(2));
    assert_eq!(digifix(&["gen", "torus", "-o", s(&bad)]).status.code(), Some(2));

    let c9 = gen(&dir, "cycle", &["9"]);
    assert_eq!(digifix(&["pull", s(&c9), "--point", "9"]).status.code(), Some(2));
    assert_eq!(digifix(&["--budget", "3", "spectrum", s(&c9)]).status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_digifix"))
        .args(["spectrum", s(&c9)])
        .env("DIGIFIX_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}

#[test]
fn output_does_not_depend_on_threads() {
    let dir = TempDir::new().unwrap();
    let b = gen(&dir, "box", &["3", "3", "2"]);
    let runs: Vec<Vec<u8>> = ["1", "4", "1", "4"]
        .iter()
        .map(|t| digifix(&["--threads", t, "spectrum", s(&b)]).stdout)
        .collect();
    assert!(runs.iter().all(|r| r == &runs[0]));
}

#[test]
fn verify_subset_exits_zero() {
    let out = digifix(&["verify", "--only", "1,10"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("2/2 criteria passed"), "{table}");
    let r = json(&digifix(&["--format", "json", "verify", "--only", "10"]));
    assert_eq!(r["result"]["all_passed"], true);
    assert_eq!(r["result"]["criteria"][0]["id"], 10);
}
