use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_effectus-lab")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn run_ok(args: &[&str]) -> Value {
    let out = lab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["schema"], "effectus-lab/1");
    r
}

#[test]
fn paschke_of_a_corner_compression_is_one_block() {
    let p = fixture("corner_p.json");
    let r = run_ok(&["dilate", "paschke", "--map", p.to_str().unwrap()]);
    assert_eq!(r["data"]["P"]["blocks"], serde_json::json!([3]));
    assert_eq!(r["config"]["command"], "dilate paschke");
}

#[test]
fn every_fixture_command_passes() {
    let f = |n: &str| fixture(n).to_str().unwrap().to_owned();
    let cases: Vec<Vec<String>> = vec![
        vec!["dilate".into(), "gns".into(), "--map".into(), f("state_m2.json")],
        vec!["dilate".into(), "stinespring".into(), "--map".into(), f("dephasing_m2.json")],
        vec!["dilate".into(), "tensor".into(), "--map".into(), f("dephasing_m2.json"), "--map2".into(), f("state_m2.json")],
        vec!["dilate".into(), "order-corr".into(), "--map".into(), f("dephasing_m2.json")],
        vec!["dilate".into(), "mediate".into(), "--map".into(), f("identity_m2.json"), "--triple".into(), f("triple_identity_m2.json")],
        vec!["effectus".into(), "asrt".into(), "--in".into(), f("effectus_m2.json")],
        vec!["effectus".into(), "seqprod".into(), "--in".into(), f("effectus_m2.json")],
        vec!["effectus".into(), "dagger".into(), "--in".into(), f("effectus_m2.json")],
        vec!["effectus".into(), "diamond".into(), "--in".into(), f("effectus_m2.json")],
        vec!["effectus".into(), "filter".into(), "--in".into(), f("effectus_m2.json")],
        vec!["effectus".into(), "sef".into(), "--in".into(), f("effectus_m2.json")],
        vec!["effectus".into(), "corner".into(), "--in".into(), f("corner_projection_m2.json")],
        vec!["effectus".into(), "laws".into(), "--algebra".into(), f("algebra_m2_m3.json")],
        vec!["algebra".into(), "structure".into(), "--in".into(), f("swap_span_basis.json")],
        vec!["algebra".into(), "carrier".into(), "--in".into(), f("carrier_m2_m3.json")],
        vec!["structs".into(), "ea".into(), "--in".into(), f("two.json")],
        vec!["structs".into(), "monoid".into(), "--in".into(), f("two.json")],
        vec!["structs".into(), "oml".into(), "--builtin".into(), "boolean:3".into()],
        vec!["structs".into(), "divisoid".into(), "--builtin".into(), "rational".into()],
        vec!["structs".into(), "dm".into(), "--scalars".into(), "two-join".into()],
    ];
    for c in &cases {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        run_ok(&args);
    }
}

#[test]
fn swap_commutant_has_blocks_three_and_one() {
    let r = run_ok(&["algebra", "commutant", "--in", fixture("swap_gens.json").to_str().unwrap()]);
    assert_eq!(r["data"]["blocks"], serde_json::json!([3, 1]));
    assert_eq!(r["data"]["block_dims"], serde_json::json!([9, 1]));
}

#[test]
fn coproduct_of_two_points_has_three_elements() {
    let p = fixture("point_join.json");
    let r = run_ok(&["structs", "coproduct", "--x", p.to_str().unwrap(), "--y", p.to_str().unwrap()]);
    assert_eq!(r["data"]["points"].as_array().unwrap().len(), 3);
}

#[test]
fn failed_verification_exits_one_with_a_witness() {
    let out = lab(&["structs", "oml", "--in", fixture("o6.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    let failed: Vec<&Value> = r["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["law"], "orthomodular");
    assert!(failed[0]["witness"].is_string());

    let out = lab(&["structs", "ea", "--in", fixture("broken_boolean.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    let out = lab(&["dilate", "paschke", "--map", "/nonexistent/map.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"source\": {\"blocks\": [2]},\n  \"target\": \n}\n").unwrap();
    let out = lab(&["dilate", "stinespring", "--map", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"), "{}", String::from_utf8_lossy(&out.stderr));

    // Kraus operator of the wrong shape.
    let shape = dir.path().join("shape.json");
    std::fs::write(&shape, r#"{"source":{"blocks":[2]},"target":{"blocks":[2]},"kraus":{"0,0":[{"rows":1,"cols":2,"re":[1,0]}]}}"#).unwrap();
    assert_eq!(lab(&["dilate", "stinespring", "--map", shape.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(lab(&["dilate"]).status.code(), Some(2));
    assert_eq!(lab(&["suite"]).status.code(), Some(2));
    assert_eq!(lab(&["structs", "oml", "--builtin", "nope"]).status.code(), Some(2));
}

#[test]
fn suite_passes_with_seed_one() {
    let r = run_ok(&["suite", "--all", "--seed", "1"]);
    assert_eq!(r["config"]["seed"], 1);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = lab(&["suite", "--all", "--seed", "42", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let map = fixture("dephasing_m2.json");
    let x = lab(&["dilate", "order-corr", "--map", map.to_str().unwrap(), "--seed", "9"]);
    let y = lab(&["dilate", "order-corr", "--map", map.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(x.stdout, y.stdout);
}
