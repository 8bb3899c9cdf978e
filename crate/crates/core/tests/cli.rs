use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn tworay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tworay")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn census_of_e1() {
    let o = tworay(&["census", &data("e1.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in [
        "preprojective component: type A~(9,4)",
        "coray tube families: 3",
        "first-type components: 3",
        "second-type components: 2",
        "preinjective components: none",
        "ZD_inf components: yes",
        "ZA_inf^inf components: yes",
    ] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }
}

#[test]
fn census_json_fields() {
    let o = tworay(&["census", &data("one_cycle.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["L"], 1);
    assert_eq!(v["preinjective_types"], serde_json::json!([[2, 1]]));
    assert_eq!(v["has_ZA_infinity_infinity"], false);
    assert_eq!(v["sigma_cycles"][0]["vertices"], serde_json::json!(["x:1:2"]));
}

#[test]
fn fundamental_census_is_not_an_error() {
    let o = tworay(&["census", &data("fundamental.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("precondition unmet"));
}

#[test]
fn consecutive_s_fails_validation() {
    let o = tworay(&["validate", &data("consecutive_s.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("DS6"));
    let o = tworay(&["validate", &data("consecutive_s.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["violations"][0]["constraint"], "DS6");
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(tworay(&["validate", &data("e1.json"), "--bogus"]).status.code(), Some(2));
    assert_eq!(tworay(&["validate", &data("missing.json")]).status.code(), Some(2));
    assert_eq!(tworay(&["extend", &data("e1.json"), "q:1:1"]).status.code(), Some(2));
    assert_eq!(tworay(&["verify", &data("e1.json"), "--lemmas", "nope"]).status.code(), Some(2));
    assert_eq!(tworay(&[]).status.code(), Some(2));
}

#[test]
fn admissible_and_extend() {
    let o = tworay(&["admissible", &data("e1.json")]);
    assert_eq!(stdout(&o), "z:1:8\nz:2:2\n");
    let o = tworay(&["extend", &data("e1.json"), "z:2:2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["new_index"], "x:2:3");
    assert_eq!(v["structure_agrees"], true);
    assert_eq!(v["system"]["T"], serde_json::json!([[4, 6], [2]]));
    let o = tworay(&["extend", &data("e1.json"), "x:1:3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ancestry_replays_e1() {
    let o = tworay(&["ancestry", &data("e1.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 7);
    assert_eq!(steps.last().unwrap()["system"], serde_json::json!({"p": [6, 3], "q": [2, 2], "S": [[2, 4, 6, 8], [2]], "T": [[4, 6], []]}));
}

#[test]
fn quiver_formats() {
    let text = stdout(&tworay(&["quiver", &data("e1.json")]));
    assert!(text.starts_with("20 vertices, 22 arrows, 9 relations (R1 5, R2 1, R3 1, R4 2)"));
    let dot = stdout(&tworay(&["quiver", &data("e1.json"), "--format", "dot"]));
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 22);
}

#[test]
fn structure_passes_axioms() {
    let o = tworay(&["structure", &data("e1.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["structure"]["I"].as_array().unwrap().len(), 16);
}

#[test]
fn verify_e1_reports_tallies() {
    let o = tworay(&["verify", &data("e1.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mismatches"], serde_json::json!([]));
    assert_eq!(v["tallies"]["tau"]["checked"], 18);
    let o = tworay(&["verify", &data("e1.json"), "--budget", "10"]);
    assert_eq!(o.status.code(), Some(1), "a skipped run is not a pass");
}

#[test]
fn enumerate_lists_and_checks() {
    let list = stdout(&tworay(&["enumerate", "--max-n", "1", "--max-p", "2", "--max-q", "1", "--max-t", "1"]));
    assert_eq!(list.lines().next(), Some(r#"{"p":[2],"q":[1],"S":[[]],"T":[[]]}"#));
    let args = ["enumerate", "--max-n", "2", "--max-p", "3", "--max-q", "2", "--max-t", "1", "--check-all"];
    let (a, b) = (tworay(&args), tworay(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("result: ok\n"));
}
