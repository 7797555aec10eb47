use std::process::{Command, Output};

fn wakimoto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wakimoto"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn det_b_prints_both_determinants() {
    let o = wakimoto(&["matrix", "det-b", "--n", "3", "--r", "2", "--gamma2", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("closed=200"), "{s}");
    assert!(s.contains("eliminated=200"), "{s}");
}

#[test]
fn imaginary_relation_suite_passes_as_json() {
    let o = wakimoto(&[
        "verify", "relations", "--n", "2", "--r", "0", "--gamma2", "1", "--mode-window", "2", "--degree", "2",
        "--report", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["suite"], "relations");
    assert_eq!(v["params"]["n"], 2);
    assert_eq!(v["params"]["gamma2"], "1/1");
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 100);
    let case = &v["cases"][0];
    assert!(case["id"].is_string() && case["pass"].is_boolean() && case["witness"].is_null());
}

#[test]
fn listed_borel_fails_on_the_vacuum_with_a_witness() {
    let o = wakimoto(&[
        "verify", "relations", "--n", "2", "--r", "1", "--gamma2", "9/4", "--lambda", "1,2", "--mode-window", "3",
        "--degree", "2", "--report", "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["failed"], 1);
    let bad: Vec<&serde_json::Value> = v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .collect();
    assert_eq!(bad[0]["id"], "highest-weight/E(1,0) kills vacuum");
    assert_eq!(bad[0]["witness"], "E(1,0)(1) = -x[1,1,0]");
}

#[test]
fn realized_highest_weight_passes() {
    let o = wakimoto(&[
        "verify", "highest-weight", "--n", "2", "--r", "1", "--lambda", "1,2", "--mode-window", "4", "--realized",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn wilson_vector_is_e_singular_only() {
    let o = wakimoto(&["sl2", "singular", "--r", "2", "--s", "0,2", "--check-window", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("e-annihilated: true"), "{s}");
    assert!(s.contains("h-annihilated: false"), "{s}");
    assert!(s.contains("h(1) v = -2*f[0]*f[4] + 2*f[2]*f[2]"), "{s}");
}

#[test]
fn sl2_realizations_pass() {
    for args in [
        vec!["--kind", "first"],
        vec!["--kind", "jk", "--lambda-seq", "0:5,1:-1/2"],
        vec!["--kind", "bf", "--K", "2", "--J", "1"],
        vec!["--kind", "second", "--K", "1/3"],
    ] {
        let mut full = vec!["sl2", "realization", "--mode-window", "2", "--degree", "2"];
        full.extend(args.iter().copied());
        let o = wakimoto(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn generation_witness_serializes_program() {
    let o = wakimoto(&["generate", "witness", "--n", "2", "--r", "1", "--target", "x[2,2,5]", "--report", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let program: serde_json::Value = serde_json::from_str(v["cases"][0]["witness"].as_str().unwrap()).unwrap();
    assert_eq!(program["target"], "x[2,2,5]");
    assert_eq!(program["steps"][0]["op"], "seed");
    assert_eq!(program["steps"][1]["operator"], "F(2,5)");
}

#[test]
fn generation_check_reaches_everything() {
    let o = wakimoto(&["generate", "check", "--n", "3", "--r", "1", "--mode-window", "1", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn probe_of_zero_is_rejected() {
    let o = wakimoto(&["probe", "submodule", "--n", "2", "--r", "1", "--vector", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn probe_of_vacuum_finds_it() {
    let o = wakimoto(&["probe", "submodule", "--n", "2", "--r", "1", "--vector", "1", "--report", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["cases"][0]["witness"], "1");
}

#[test]
fn character_compare_reports_census_mismatch_for_split_rank() {
    let ok = wakimoto(&["character", "compare", "--n", "2", "--r", "0", "--mode-window", "3", "--delta", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = wakimoto(&["character", "compare", "--n", "2", "--r", "1", "--mode-window", "3", "--delta", "3"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("PASS realized complement census = Fock census"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(wakimoto(&["verify", "relations", "--n", "2"]).status.code(), Some(2));
    assert_eq!(wakimoto(&["matrix", "det-b", "--n", "2", "--r", "1", "--gamma2", "0.5"]).status.code(), Some(2));
    assert_eq!(wakimoto(&["matrix", "det-b", "--n", "2", "--r", "3"]).status.code(), Some(2));
    assert_eq!(wakimoto(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let args = ["character", "compare", "--n", "2", "--r", "1", "--mode-window", "2", "--report", "json"];
    let a = wakimoto(&args);
    let b = wakimoto(&args);
    assert_eq!(a.stdout, b.stdout);
    let dir = std::env::temp_dir().join(format!("wakimoto-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let mut with_file = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    with_file.extend(["--output", &p]);
    let c = wakimoto(&with_file);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
