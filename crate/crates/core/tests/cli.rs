use std::process::Command;

use serde_json::Value;

fn csl_lab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_csl-lab")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = csl_lab(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn count_csv_matches_series_terms() {
    let (code, out, _) = csl_lab(&["count", "--lattice", "square", "--max-index", "73", "--format", "csv"]);
    assert_eq!(code, 0);
    let nonzero: Vec<(u64, u64)> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse::<u64>().unwrap()).collect::<Vec<_>>())
        .filter(|r| r[3] != 0)
        .map(|r| (r[0], r[3]))
        .collect();
    let expect = [(1, 1), (5, 2), (13, 2), (17, 2), (25, 2), (29, 2), (37, 2), (41, 2), (53, 2), (61, 2), (65, 4), (73, 2)];
    assert_eq!(nonzero, expect);
}

#[test]
fn theorem_check_exit_codes() {
    let v = json(&["check", "thm2", "--lattice", "square", "--range", "50"]);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["theorem"], "thm2");
    assert!(v["pairs_tested"].as_u64().unwrap() > 0);
    let v = json(&["check", "lemma6", "--lattice", "square", "--range", "30"]);
    assert_eq!(v["reading"], "m");
    let v = json(&["check", "thm9", "--lattice", "2zx3z", "--range", "36"]);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    let v = json(&["check", "openq", "--lattice", "zx5z", "--range", "50"]);
    assert_eq!(v["flag"], false);
}

#[test]
fn sampled_sweeps_are_reproducible() {
    let args = ["check", "tower", "--lattice", "cubic", "--range", "5", "--sample", "50", "--seed", "11"];
    let a = csl_lab(&args);
    let b = csl_lab(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!((v["seed"].as_u64(), v["sample"].as_u64(), v["pairs_tested"].as_u64()), (Some(11), Some(50), Some(50)));
}

#[test]
fn sigma_of_quarter_turn() {
    let v = json(&["sigma", "--lattice", "2zx3z", "--isometry", "rot90"]);
    assert_eq!(v["sigma"], 6);
    let dir = tempfile::tempdir().unwrap();
    let iso = dir.path().join("rot90.json");
    std::fs::write(&iso, r#"{"dim":2,"mat":[["0","-1"],["1","0"]]}"#).unwrap();
    let w = json(&["sigma", "--lattice", "2zx3z", "--isometry", iso.to_str().unwrap()]);
    assert_eq!(w, v);
    let v = json(&["sigma", "--lattice", "square", "--isometry", "3/5,-4/5;4/5,3/5"]);
    assert_eq!((v["sigma"].as_u64(), v["den"].as_u64()), (Some(5), Some(5)));
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("enum.json");
    let (code, out, _) = csl_lab(&["enumerate", "--lattice", "cubic", "--max-sigma", "9", "--output", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let first = std::fs::read_to_string(&path).unwrap();
    let (_, again, _) = csl_lab(&["enumerate", "--lattice", "cubic", "--max-sigma", "9"]);
    assert_eq!(first, again);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["complete"], true);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn lattice_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.json");
    std::fs::write(&path, r#"{"dim":2,"den":1,"mat":[["2","0"],["0","3"]]}"#).unwrap();
    let v = json(&["count", "--lattice", path.to_str().unwrap(), "--max-index", "6"]);
    assert_eq!(v["rows"]["6"]["f"], 1);
    assert_eq!(v["rows"]["2"]["f"], 0);
}

#[test]
fn decompositions() {
    let v = json(&["decompose", "--lattice", "square", "--isometry", "r65", "--pi", "13,5"]);
    assert_eq!(v["csl_decomposition"]["parts"].as_array().unwrap().len(), 2);
    assert_eq!(v["pi_decomposition"]["ordering"], serde_json::json!([13, 5]));
    let v = json(&["decompose", "--lattice", "2zx3z", "--isometry", "rot90", "--pi", "2,3"]);
    assert!(v["csl_decomposition"].is_null());
    assert!(v["pi_decomposition"].is_null());
}

#[test]
fn series_and_ssl() {
    let v = json(&["series", "--terms", "200"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["dirichlet"]["coefficients"]["65"], 4);
    let v = json(&["ssl", "check", "--lattice", "zx5z", "--max-index", "50"]);
    assert_eq!(v["g_supermultiplicative"], true);
    assert!(!v["g_witnesses"].as_array().unwrap().is_empty());
    assert!(v["f_witnesses"].as_array().unwrap().is_empty());
    let (code, out, _) = csl_lab(&["ssl", "count", "--lattice", "square", "--max-index", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "m,g\n1,1\n2,1\n3,0\n4,1\n5,2\n");
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["bogus"],
        vec!["count", "--lattice", "hexagonal", "--max-index", "5"],
        vec!["sigma", "--lattice", "square", "--isometry", "1,1;0,1"],
        vec!["sigma", "--lattice", "square", "--isometry", "q3"],
        vec!["check", "thm2", "--lattice", "square", "--range", "10", "--format", "csv"],
        vec!["enumerate", "--lattice", "2zx3z", "--max-sigma", "100000"],
    ] {
        let (code, _, err) = csl_lab(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(!err.is_empty());
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let (code, _, err) = csl_lab(&["count", "--lattice", bad.to_str().unwrap(), "--max-index", "5"]);
    assert_eq!(code, 1);
    assert!(err.contains("malformed"));
    let (code, out, _) = csl_lab(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check"));
}
