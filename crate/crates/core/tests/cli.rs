use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hypershare"));
    c.env_remove("HYPERSHARE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

#[test]
fn cube_d3_is_perfect_with_ratio_three_halves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c3.json");
    let o = run(&["--json", "cube", "--d", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["perfect"]["perfect"], true);
    assert_eq!(v["round_trip"], true);
    assert_eq!(v["ratios"]["worst"], "3/2");
    assert_eq!(v["ratios"]["average"], "3/2");
    assert!(v["ratios"]["per_vertex"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x["ratio"] == "3/2"));
    assert!(out.exists());
}

#[test]
fn cube_d2_p3_has_ratio_one() {
    let o = run(&["cube", "--d", "2", "--prime", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("average   1\n"), "{text}");
    assert!(text.contains("GF(3)"));
}

#[test]
fn cube_d1_is_a_usage_error() {
    let o = run(&["cube", "--d", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("d >= 2"));
}

#[test]
fn missing_and_bad_flags_are_usage_errors() {
    assert_eq!(run(&["cube"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["cube", "--d", "2", "--prime", "4"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--cube", "2", "--path", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["bound", "--cube", "2", "--objective", "median"]).status.code(),
        Some(2)
    );
}

#[test]
fn golden_dealing_on_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    let scheme = fixture("c2_p3.json");
    let o = run(&[
        "deal",
        "--scheme",
        scheme.to_str().unwrap(),
        "--secret",
        "2",
        "--seed",
        "0",
        "--out",
        bundle.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let got = fs::read_to_string(&bundle).unwrap();
    assert_eq!(got, fs::read_to_string(fixture("c2_p3_seed0_bundle.json")).unwrap());

    // The face 00-01-11-10 has pad r on 00 and 11 and r + s on 01 and 10.
    let v: Value = serde_json::from_str(&got).unwrap();
    let share = |i: usize| v["shares"][i]["values"][0].as_u64().unwrap();
    let s = 2;
    assert_eq!(share(0), share(3));
    assert_eq!(share(1), share(2));
    assert_eq!((share(0) + s) % 3, share(1));
}

#[test]
fn seed_comes_from_the_environment() {
    let scheme = fixture("c2_p3.json");
    let args = ["deal", "--scheme", scheme.to_str().unwrap(), "--secret", "1"];
    let a = bin().args(args).env("HYPERSHARE_SEED", "5").output().unwrap();
    let b = run(&[&args[..], &["--seed", "5"]].concat());
    let c = run(&[&args[..], &["--seed", "6"]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn deal_then_reconstruct_on_c3() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = dir.path().join("c3.json");
    let bundle = dir.path().join("b.json");
    let (scheme_s, bundle_s) = (scheme.to_str().unwrap(), bundle.to_str().unwrap());
    assert_eq!(run(&["cube", "--d", "3", "--out", scheme_s]).status.code(), Some(0));
    let o = run(&[
        "deal", "--scheme", scheme_s, "--secret", "3,5", "--seed", "11", "--out", bundle_s,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = run(&[
        "--json",
        "reconstruct",
        "--scheme",
        scheme_s,
        "--bundle",
        bundle_s,
        "--edge",
        "000",
        "001",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["secret"], serde_json::json!([3, 5]));

    // Vertex indices work too.
    let o = run(&[
        "reconstruct",
        "--scheme",
        scheme_s,
        "--bundle",
        bundle_s,
        "--edge",
        "7",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("secret 3,5"));

    let o = run(&[
        "reconstruct",
        "--scheme",
        scheme_s,
        "--bundle",
        bundle_s,
        "--edge",
        "000",
        "011",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unqualified"));
}

#[test]
fn bad_secrets_are_rejected() {
    let scheme = fixture("c2_p3.json");
    let s = scheme.to_str().unwrap();
    for secret in ["3", "1,1", "x"] {
        let o = run(&["deal", "--scheme", s, "--secret", secret]);
        assert_eq!(o.status.code(), Some(2), "secret {secret}");
    }
}

#[test]
fn truncated_bundle_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let full = fs::read_to_string(fixture("c2_p3_seed0_bundle.json")).unwrap();
    let cut = dir.path().join("cut.json");
    fs::write(&cut, &full[..full.len() / 2]).unwrap();
    let scheme = fixture("c2_p3.json");
    let o = run(&[
        "reconstruct",
        "--scheme",
        scheme.to_str().unwrap(),
        "--bundle",
        cut.to_str().unwrap(),
        "--edge",
        "00",
        "01",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn bundle_from_another_scheme_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let other = dir.path().join("c2_p5.json");
    assert_eq!(
        run(&["cube", "--d", "2", "--prime", "5", "--out", other.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let bundle = fixture("c2_p3_seed0_bundle.json");
    let o = run(&[
        "reconstruct",
        "--scheme",
        other.to_str().unwrap(),
        "--bundle",
        bundle.to_str().unwrap(),
        "--edge",
        "00",
        "01",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn path_bound_worst_case() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("p4.lp");
    let witness = dir.path().join("w.json");
    let o = run(&[
        "--json",
        "bound",
        "--path",
        "4",
        "--objective",
        "worst",
        "--method",
        "lp",
        "--export-lp",
        lp.to_str().unwrap(),
        "--out",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["bound"], "3/2");
    let text = fs::read_to_string(lp).unwrap();
    assert!(text.contains("Minimize\n obj: t\n"));
    assert!(text.trim_end().ends_with("End"));
    let w: Value = serde_json::from_str(&fs::read_to_string(witness).unwrap()).unwrap();
    assert_eq!(w["n"], 4);
}

#[test]
fn lattice_certificate_bound() {
    let o = run(&["bound", "--lattice", "2", "4", "--method", "certificate"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("bound     3/2\n"), "{text}");
    let o = run(&["--json", "bound", "--lattice", "3", "6", "--method", "certificate"]);
    assert_eq!(json(&o)["bound"], "5/2");
}

#[test]
fn oversized_lp_is_a_size_error() {
    let o = run(&["bound", "--cube", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("certificate"));
}

#[test]
fn decimal_flag_adds_floats() {
    let o = run(&["--decimal", "bound", "--lattice", "1", "4", "--method", "certificate"]);
    assert!(stdout(&o).contains("3/4 (0.7500)"), "{}", stdout(&o));
}

#[test]
fn lattice_command() {
    let o = run(&["--json", "lattice", "--d", "2", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["perfect"]["perfect"], true);
    assert_eq!(v["formula_total"], "26");
    assert_eq!(v["ratios"]["total"], "28");
    assert_eq!(v["deviation"], "2");
    assert_eq!(v["ratios"]["worst"], "2");

    let o = run(&["--json", "lattice", "--d", "2", "--k", "2"]);
    let v = json(&o);
    assert_eq!(
        (v["parts"].as_u64(), &v["ratios"]["worst"]),
        (Some(1), &Value::from("1"))
    );

    let o = run(&["--json", "lattice", "--d", "3", "--k", "2"]);
    assert_eq!(json(&o)["ratios"]["average"], "3/2");

    assert_eq!(run(&["lattice", "--d", "2", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["--json", "cube", "--d", "3", "--seed", "9"]);
    let b = run(&["--json", "cube", "--d", "3", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["lattice", "--d", "2", "--k", "4"]);
    let b = run(&["lattice", "--d", "2", "--k", "4"]);
    assert_eq!(a.stdout, b.stdout);
}
