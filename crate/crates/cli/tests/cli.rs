use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn rbskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbskit")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rbskit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn build_rbs_f2_squared_has_four_flags() {
    let v = json(&rbskit(&["build", "rbs", "--ring", "F2", "--n", "2"]));
    assert_eq!(v["object"], "rbs");
    assert_eq!(v["category"]["objects"].as_array().unwrap().len(), 4);
}

#[test]
fn build_rank_zero_is_the_terminal_category() {
    let v = json(&rbskit(&["build", "rbs", "--ring", "F3", "--n", "0"]));
    assert_eq!(v["category"]["objects"].as_array().unwrap().len(), 1);
    assert_eq!(v["category"]["morphisms"].as_array().unwrap().len(), 1);
}

#[test]
fn build_tits_f_vector() {
    let v = json(&rbskit(&["build", "tits", "--q", "2", "--n", "3"]));
    assert_eq!(v["summary"]["f_vector"], serde_json::json!([14, 21]));
}

#[test]
fn build_output_is_byte_stable() {
    for args in [&["build", "mE", "--q", "2", "--n", "2", "--cap", "2"][..], &["build", "q", "--q", "2", "--n", "2"][..]] {
        let (a, b) = (rbskit(args), rbskit(args));
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn homology_of_rbs_f3_squared() {
    let v = json(&rbskit(&["--json", "homology", "rbs", "--ring", "F3", "--n", "2", "--depth", "5"]));
    assert_eq!(v["groups"][0], "Z");
    assert_eq!(v["groups"][1], "Z/2");
    assert_eq!(v["result"]["max_trusted_degree"], 4);
}

#[test]
fn homology_mod_p_of_rbs_f2_squared_is_acyclic() {
    let v = json(&rbskit(&["--json", "homology", "rbs", "--ring", "F2", "--n", "2", "--depth", "5", "--coeff", "F2"]));
    assert_eq!(v["result"]["betti"], serde_json::json!([1, 0, 0, 0, 0]));
}

#[test]
fn homology_reads_a_built_category() {
    let built = rbskit(&["build", "bgl", "--ring", "F2", "--n", "2"]);
    assert_eq!(code(&built), 0);
    let path = scratch("bgl.json", std::str::from_utf8(&built.stdout).unwrap());
    let v = json(&rbskit(&["--json", "homology", "--input", path.to_str().unwrap(), "--depth", "4"]));
    let groups: Vec<&str> = v["groups"].as_array().unwrap().iter().map(|g| g.as_str().unwrap()).collect();
    assert_eq!(groups, ["Z", "Z/2", "0", "Z/6"]);
}

#[test]
fn tits_building_reduced_homology() {
    let v = json(&rbskit(&["--json", "homology", "tits", "--q", "2", "--n", "2"]));
    assert_eq!(v["reduced_groups"][0], "Z^2");
}

#[test]
fn verify_named_check_passes() {
    let o = rbskit(&["verify", "steinberg", "--q", "3", "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("[pass]"));
    let v = json(&rbskit(&["--json", "verify", "pi1", "--ring", "F3", "--n", "2", "--depth", "4"]));
    assert_eq!(v[0]["outcome"]["status"], "pass", "{v}");
    assert!(v[0].get("elapsed_ms").map_or(true, Value::is_null));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&rbskit(&["verify", "no-such-check"])), 1);
    assert_eq!(code(&rbskit(&["build", "rbs", "--ring", "F6", "--n", "2"])), 1);
    assert_eq!(code(&rbskit(&["homology", "rbs", "--ring", "F2", "--n", "2", "--coeff", "Q"])), 1);
    assert_eq!(code(&rbskit(&["frobnicate"])), 1);
    let bad_key = scratch("bad-key.toml", "no_such_guard = 3\n");
    assert_eq!(code(&rbskit(&["--config", bad_key.to_str().unwrap(), "checks"])), 1);
    assert_eq!(code(&rbskit(&["--help"])), 0);
}

#[test]
fn guard_violations_exit_two() {
    let cfg = scratch("tight.toml", "max_gl_candidates = 1\n");
    let o = rbskit(&["--config", cfg.to_str().unwrap(), "build", "rbs", "--ring", "F2", "--n", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("max_gl_candidates"));
}

#[test]
fn invalid_categories_exit_three() {
    let bad = scratch(
        "bad.json",
        r#"{"objects":["a"],"morphisms":[{"src":0,"tgt":0,"label":"e"},{"src":0,"tgt":0,"label":"f"}],
            "identities":[0],"composition":[[0,0,0],[0,1,0],[1,0,1],[1,1,0]]}"#,
    );
    assert_eq!(code(&rbskit(&["homology", "--input", bad.to_str().unwrap()])), 3);
}

#[test]
fn bench_counts_agree_with_closed_forms() {
    let v = json(&rbskit(&["--json", "bench", "gl-enum", "--ring", "F2", "--n", "3"]));
    assert_eq!(v["agrees"], true);
    let v = json(&rbskit(&["--json", "bench", "nerve", "--sym", "3", "--depth", "4"]));
    assert_eq!(v["agrees"], true);
    let v = json(&rbskit(&["--json", "bench", "snf", "--size", "30"]));
    assert_eq!(v["agrees"], true);
}
