use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trackalg"))
        .args(args)
        .current_dir(root())
        .env_remove("TRACKALG_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corrupted_tc(dir: &Path) -> PathBuf {
    let text = std::fs::read_to_string(root().join("corpus/Tc.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["linearity"]["terms"][0]["kappa"] = serde_json::json!([1, 1]);
    let path = dir.join("bad.json");
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

#[test]
fn validate_tc_lists_seven_equations() {
    let o = run(&["validate", "corpus/Tc.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("linearity track equations: 7/7 passed"), "{}", stdout(&o));
}

#[test]
fn corrupted_instance_exits_two_and_replays() {
    let dir = std::env::temp_dir().join(format!("trackalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = corrupted_tc(&dir);
    let o = run(&["validate", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
    let failed = v["result"]["linearity"]["laws"]
        .as_array()
        .unwrap()
        .iter()
        .find(|l| l["passed"] == false)
        .unwrap();
    let w = dir.join("witness.json");
    std::fs::write(&w, failed["witness"].to_string()).unwrap();
    let r = run(&["validate", bad.to_str().unwrap(), "--replay", w.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(stdout(&r).contains("fails"));
    let r = run(&["validate", "corpus/Tc.json", "--replay", w.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(run(&["validate", "corpus/missing.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["brackets", "corpus/M2.json", "--classes", "x,y,x"]).status.code(), Some(1));
    assert_eq!(run(&["zigzag", "corpus/Q2.json"]).status.code(), Some(1));
    assert_eq!(run(&["fixtures", "gen", "Nope"]).status.code(), Some(1));
}

#[test]
fn brackets_on_m2() {
    let o = run(&["brackets", "corpus/M2.json", "--classes", "x,x,x"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("[1]  witness"), "{s}");
    assert!(s.contains("equality Some(true)"), "{s}");
}

#[test]
fn strictify_q2_reports_dk_verdicts() {
    let o = run(&[
        "strictify", "corpus/Q2.json", "--ring", "zpp", "--word-bound", "2", "--coeffs", "0,1,3", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let z = &v["result"]["zigzag"];
    assert_eq!(z["sigma_q"]["equivalence"], true);
    assert_eq!(z["q_equivalence"], true);
    assert_eq!(z["g"]["equivalence"], true);
    assert_eq!(v["bounds"]["word_bound"], 2);
}

#[test]
fn json_reports_are_byte_identical() {
    let args = ["linearity", "corpus/Tc.json", "--format", "json", "--seed", "11"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"seed\": 11"));
}

#[test]
fn shipped_corpus_matches_generator() {
    for name in ["Tc", "M2", "Q2"] {
        let o = run(&["fixtures", "gen", name]);
        assert_eq!(o.status.code(), Some(0));
        let file = std::fs::read_to_string(root().join(format!("corpus/{name}.json"))).unwrap();
        assert_eq!(stdout(&o), file, "{name}");
    }
}

#[test]
fn zigzag_on_generated_pair() {
    let dir = std::env::temp_dir().join(format!("trackalg-pair-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("Pair.json");
    assert_eq!(run(&["fixtures", "gen", "Pair", "--out", path.to_str().unwrap()]).status.code(), Some(0));
    let o = run(&["zigzag", path.to_str().unwrap(), "--word-bound", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}
