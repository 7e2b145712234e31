use std::process::{Command, Output};

use curvesing::cli::catalog;
use curvesing::cli::report::{verdict_from_json, CurveValues};
use curvesing::inequalities::certify;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvesing"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tmp(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("curvesing-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn germ_reports_cusp_values() {
    let o = run(&["--format", "structured", "germ", "(2; 3)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "curvesing.germ/1");
    assert_eq!(v["numbers"]["mu"], 2);
    assert_eq!(v["local"]["H2"], "-1/6");
    assert_eq!(v["local"]["N2"], "-5/6");
    assert_eq!(v["local"]["KDT2"], "-1");
    let bound = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["id"] == "local-bound")
        .unwrap();
    assert_eq!((bound["lhs"].as_str(), bound["rhs"].as_str()), (Some("1"), Some("1")));
}

#[test]
fn two_pair_germ_has_two_comb_nodes() {
    let o = run(&["--format", "structured", "germ", "(4; 6, 7)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["numbers"]["mu"], 16);
    assert_eq!(v["comb_nodes"].as_array().unwrap().len(), 2);
    let bound = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["id"] == "local-bound")
        .unwrap();
    assert_ne!(bound["lhs"], bound["rhs"]);
}

#[test]
fn input_errors_exit_one() {
    let o = run(&["germ", "(2; 4)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("divides"));
    assert_eq!(run(&["verify", "nosuch"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["curve", "no-such-curve"]).status.code(), Some(1));
    let bad = write_tmp("bad.curve", "degree 4\nsingularity puiseux (2; 3) x0\n");
    assert_eq!(run(&["curve", &bad]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn unrealizable_configuration_exits_two() {
    let path = write_tmp(
        "eleven.curve",
        "degree 6\nirreducible\nsingularity puiseux (2; 3) x11\n",
    );
    let o = run(&["curve", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("[fails] genus"));
}

#[test]
fn quintic_with_six_cusps_is_consistent() {
    let path = write_tmp(
        "quintic.curve",
        "# six ordinary cusps\ndegree 5\nirreducible\nrational\nsingularity puiseux (2; 3) x6\n",
    );
    let o = run(&["--format", "structured", "curve", &path]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["genus"], 0);
    assert_eq!(o.status.code(), Some(if v["unrealizable"] == true { 2 } else { 0 }));
}

#[test]
fn structured_output_is_deterministic_and_round_trips() {
    let a = run(&["--format", "structured", "--dump-graph", "curve", "quartic3"]);
    let b = run(&["--format", "structured", "--dump-graph", "curve", "quartic3"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    let expected = certify(&catalog::lookup("quartic3").unwrap()).unwrap();
    assert_eq!(CurveValues::from_json(&v).unwrap(), CurveValues::of(&expected));
    for x in v["verdicts"].as_array().unwrap() {
        assert!(verdict_from_json(x).is_some());
    }
    assert!(v["germs"][0]["germ"]["graph_text"]
        .as_str()
        .unwrap()
        .starts_with("tree 3"));
}

#[test]
fn verify_is_seeded() {
    let a = run(&[
        "--format",
        "structured",
        "verify",
        "lemma4",
        "--seed",
        "5",
        "--count",
        "20",
    ]);
    let b = run(&[
        "--format",
        "structured",
        "verify",
        "lemma4",
        "--seed",
        "5",
        "--count",
        "20",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 5);
}

#[test]
fn catalog_lists_entries() {
    let o = run(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["cubic1", "quartic3", "sextic9", "hk:<k>"] {
        assert!(text.contains(name));
    }
    let cubic = run(&["catalog", "cubic1"]);
    assert_eq!(cubic.status.code(), Some(0));
    assert!(stdout(&cubic).contains("Kodaira dimension of the complement: unknown"));
}

#[test]
fn proximity_block_from_a_file() {
    let path = write_tmp(
        "tacnode.germ",
        "singularity proximity\n  point 1\n  point 2 prox 1 exits 2\nend\n",
    );
    let o = run(&["--format", "structured", "germ", &path]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["numbers"]["mu"], 3);
    assert_eq!(v["numbers"]["r"], 2);
}
