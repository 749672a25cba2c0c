use std::fs;
use std::path::Path;
use std::process::Command;

fn run(script: &str, out: &Path, extra: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fibercoh"))
        .arg("--script")
        .arg(script)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn script_path(name: &str) -> String {
    format!("{}/scripts/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn katzman_outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run(&script_path("katzman.fc"), a.path(), &["--seed", "11", "--csv"]);
    assert!(ra.status.success(), "{}", String::from_utf8_lossy(&ra.stderr));
    run(&script_path("katzman.fc"), b.path(), &["--seed", "11", "--csv"]);
    let fa = read_dir_sorted(a.path());
    assert_eq!(fa, read_dir_sorted(b.path()));
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert!(names.contains(&"01_localcoh.json") && names.contains(&"03_harness.csv"));
    let harness: serde_json::Value = serde_json::from_str(&fa.iter().find(|(n, _)| n == "03_harness.json").unwrap().1).unwrap();
    assert_eq!(harness["seed"], 11);
    assert_eq!(harness["result"]["locally_constant"], true);
    let jumps = harness["result"]["jumps"].as_array().unwrap();
    assert!(jumps.iter().any(|j| j == "s=1,t=-1"));
}

#[test]
fn maps_script() {
    let d = tempfile::tempdir().unwrap();
    let r = run(&script_path("maps.fc"), d.path(), &[]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let get = |n: &str| -> serde_json::Value { serde_json::from_str(&fs::read_to_string(d.path().join(n)).unwrap()).unwrap() };
    let conic = get("01_ratmap.json");
    assert_eq!((conic["result"]["deg_y"].as_i64(), conic["result"]["deg_g"].as_i64()), (Some(2), Some(1)));
    assert_eq!(get("02_ratmap.json")["result"]["deg_g"], 2);
    let rep = get("03_ratmap.json");
    assert_eq!(rep["result"]["jump_fibers"], serde_json::json!(["t=0"]));
    assert_eq!(get("04_specialize.json")["result"]["agrees"], true);
}

#[test]
fn parse_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let s = d.path().join("bad.fc");
    fs::write(&s, "ring R base QQ vars x:1 order grevlex\nideal I = (x);\n").unwrap();
    let r = run(s.to_str().unwrap(), &d.path().join("out"), &[]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("line 2, column 1"));
}

#[test]
fn empty_command_list_writes_nothing() {
    let d = tempfile::tempdir().unwrap();
    let s = d.path().join("empty.fc");
    fs::write(&s, "ring R base QQ vars x:1, y:1;\n").unwrap();
    let out = d.path().join("out");
    let r = run(s.to_str().unwrap(), &out, &[]);
    assert!(r.status.success());
    assert!(!out.exists());
}

#[test]
fn command_errors_exit_nonzero() {
    let d = tempfile::tempdir().unwrap();
    let s = d.path().join("zero.fc");
    fs::write(&s, "ring R base QQ vars x:1;\nideal I = (1);\nmodule Z = quotient I;\ncmd invariants Z;\ncmd betti Z;\n").unwrap();
    let out = d.path().join("out");
    let r = run(s.to_str().unwrap(), &out, &[]);
    assert_eq!(r.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("01_invariants.json")).unwrap()).unwrap();
    assert_eq!(doc["error"], "module is zero");
    assert!(out.join("02_betti.json").exists());
}

#[test]
fn format_round_trips() {
    let r = Command::new(env!("CARGO_BIN_EXE_fibercoh"))
        .args(["--script", &script_path("katzman.fc"), "--format"])
        .output()
        .unwrap();
    let text = String::from_utf8(r.stdout).unwrap();
    let a = fibercoh::script::Script::parse(&text).unwrap();
    let b = fibercoh::script::Script::parse(&fs::read_to_string(script_path("katzman.fc")).unwrap()).unwrap();
    assert_eq!(a, b);
}
