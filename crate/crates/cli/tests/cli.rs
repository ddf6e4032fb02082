use std::path::PathBuf;

use gauge_ideals::checks::is_t_family;
use gauge_ideals::{DirectionModel, SubsetMask};
use gauge_ideals_cli::cli::{run_captured, Output};
use gauge_ideals_cli::formats::{parse_family, parse_model};
use serde_json::{json, Value};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    run_captured(std::iter::once("gauge-ideals").chain(args.iter().copied()))
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out.stdout))
}

#[test]
fn t_check_of_l_fails_with_witness() {
    let out = run(&[
        "family",
        "check",
        &data("ds_b.json"),
        &data("ds_b_L.json"),
        "--mode",
        "t",
    ]);
    assert_eq!(out.code, 1);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], json!(false));
    assert_eq!(v["violated_condition"], json!("t_equation"));
    assert_eq!(v["witness"]["F"], json!("1"));
    assert_eq!(v["witness"]["i"], json!(2));

    // Feeding the witness back reproduces the violation.
    let model = parse_model(&std::fs::read_to_string(data("ds_b.json")).unwrap()).unwrap();
    let l = parse_family(&model, &std::fs::read_to_string(data("ds_b_L.json")).unwrap()).unwrap();
    let f = SubsetMask::single(0);
    let i = 1;
    assert_ne!(l.get(f), model.phi(i, l.get(f)) & l.get(f.with(i)));
    assert!(!is_t_family(&model, &l).unwrap().verdict());
}

#[test]
fn other_check_modes() {
    let nt = run(&[
        "family",
        "check",
        &data("ds_b.json"),
        &data("ds_b_L.json"),
        "--mode",
        "nt",
    ]);
    assert_eq!(nt.code, 1);
    assert_eq!(stdout_json(&nt)["violated_condition"], json!("nt_condition_iv"));
    let o = run(&[
        "family",
        "check",
        &data("ds_b.json"),
        &data("ds_b_L.json"),
        "--mode",
        "o",
    ]);
    assert_eq!(o.code, 1);
    let missing_k = run(&[
        "family",
        "check",
        &data("ds_b.json"),
        &data("ds_b_L.json"),
        "--mode",
        "rel",
    ]);
    assert_eq!(missing_k.code, 2);
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"rank":2,"sets":{"":[],"1":[],"2":[],"1,2":[]}}"#).unwrap();
    let rel = run(&[
        "family",
        "check",
        &data("ds_b.json"),
        empty.to_str().unwrap(),
        "--mode",
        "rel",
        "--k",
        empty.to_str().unwrap(),
    ]);
    assert_eq!(rel.code, 0, "{rel:?}");
    assert_eq!(stdout_json(&rel)["verdict"], json!(true));
}

#[test]
fn compute_i_of_ds_b() {
    let out = run(&["compute", "if", &data("ds_b.json")]);
    assert_eq!(out.code, 0);
    assert_eq!(
        stdout_json(&out),
        json!({"rank": 2, "sets": {"": [], "1": ["p", "q"], "1,2": ["p", "q"], "2": ["q"]}})
    );
    let j = run(&["compute", "jf", &data("ds_a.json")]);
    assert_eq!(stdout_json(&j)["sets"]["1"], json!(["v1"]));
}

#[test]
fn enumerate_counts() {
    let out = run(&["enumerate", &data("k1.json"), "--count-only"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "6\n"));
    let lp = run(&["enumerate", &data("single_loop.json"), "--count-only"]);
    assert_eq!(lp.stdout, "3\n");
    let dir = tempfile::tempdir().unwrap();
    let i_path = dir.path().join("i.json");
    std::fs::write(&i_path, run(&["compute", "if", &data("single_loop.json")]).stdout).unwrap();
    let o = run(&[
        "enumerate",
        &data("single_loop.json"),
        "--relative",
        i_path.to_str().unwrap(),
    ]);
    let v = stdout_json(&o);
    assert_eq!((v["mode"].clone(), v["count"].clone()), (json!("O"), json!(2)));
}

#[test]
fn output_is_independent_of_jobs() {
    for model in ["k2.json", "ds_b.json", "uw.json"] {
        let one = run(&["enumerate", &data(model), "--jobs", "1"]);
        let three = run(&["enumerate", &data(model), "--jobs", "3"]);
        assert_eq!(one, three);
        let one = run(&["lattice", &data(model), "--jobs", "1"]);
        let three = run(&["lattice", &data(model), "--jobs", "3"]);
        assert_eq!(one, three);
    }
}

#[test]
fn lattice_exports() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("l.dot");
    let js = dir.path().join("l.json");
    let out = run(&[
        "lattice",
        &data("single_loop.json"),
        "--dot",
        dot.to_str().unwrap(),
        "--json",
        js.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let dot = std::fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("digraph lattice {"));
    assert_eq!(dot.matches(" -> ").count(), 2);
    assert!(dot.contains("label=\"all-empty\""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(js).unwrap()).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(v["cover_edges"].as_array().unwrap().len(), 2);
    let top = v["top"].as_str().unwrap();
    let top_node = v["nodes"].as_array().unwrap().iter().find(|n| n["id"] == top).unwrap();
    assert_eq!(top_node["family"]["sets"]["1"], json!(["v"]));

    let k1 = stdout_json(&run(&["lattice", &data("k1.json")]));
    assert_eq!(k1["nodes"].as_array().unwrap().len(), 6);
}

#[test]
fn load_errors_exit_2() {
    let missing = run(&["validate", "/nonexistent/model.json"]);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("cannot read"));
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("{", "malformed json"),
        (
            r#"{"kind":"kgraph","rank":2,"vertices":["u","w"],"adjacency":[[[0,1],[0,0]],[[0,0],[1,0]]]}"#,
            "commute",
        ),
        (
            r#"{"kind":"dynsys","rank":1,"points":["p","p"],"maps":[{}]}"#,
            "duplicate",
        ),
        (
            r#"{"kind":"kgraph","rank":1,"vertices":["u"],"adjacency":[[[-2]]]}"#,
            "negative",
        ),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&path, text).unwrap();
        let out = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(out.code, 2, "{text}");
        assert!(out.stderr.to_lowercase().contains(needle), "{text}: {}", out.stderr);
    }
    let ok = run(&["validate", &data("ds_a.json")]);
    assert_eq!(ok.code, 0);
    assert_eq!(stdout_json(&ok)["kind"], json!("dynsys"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["enumerate", &data("k1.json"), "--bogus"]).code, 2);
    assert_eq!(run(&["family", "check", &data("k1.json")]).code, 2);
    assert_eq!(run(&["enumerate", &data("k1.json"), "--jobs", "0"]).code, 2);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("crosscheck"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = run(&["enumerate", &data("k2.json"), "--budget", "2"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("budget"));
}

#[test]
fn random_is_reproducible_and_valid() {
    let args = [
        "random",
        "--kind",
        "kgraph",
        "--rank",
        "2",
        "--vertices",
        "4",
        "--seed",
        "42",
    ];
    let a = run(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a, run(&args));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    std::fs::write(&path, &a.stdout).unwrap();
    assert_eq!(run(&["validate", path.to_str().unwrap()]).code, 0);
    let rejected = run(&[
        "random",
        "--kind",
        "dynsys",
        "--rank",
        "2",
        "--vertices",
        "3",
        "--seed",
        "1",
        "--strategy",
        "rejection",
        "--retries",
        "0",
    ]);
    assert_eq!(rejected.code, 2);
}

#[test]
fn crosscheck_single_model_and_corpus() {
    let out = run(&["crosscheck", &data("ds_b.json")]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("0 discrepancies"));
    let corpus = run(&["crosscheck", "--corpus", &data("small_corpus.json"), "--jobs", "2"]);
    assert_eq!(corpus.code, 0, "{}", corpus.stderr);
    assert_eq!(run(&["crosscheck"]).code, 2);
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_gauge-ideals");
    let out = std::process::Command::new(bin)
        .args(["family", "check", &data("ds_b.json"), &data("ds_b_L.json"), "--mode", "t"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["witness"]["i"], json!(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fail"));
    let out = std::process::Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}
