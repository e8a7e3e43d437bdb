use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use steiner_core::{fixture, format_family, list_fixtures};

fn steiner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steiner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn verify_family_fixture() {
    let o = steiner(&["verify-family", "--fixture", "s2-8-225-g559-3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("λ=1: OK (224/224 differences covered once)"));
}

#[test]
fn verify_family_mutated_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.df");
    let text = fixture("s2-8-225-g559-1").unwrap().text.replace("447", "446");
    fs::write(&path, text).unwrap();
    let o = steiner(&["verify-family", p(&path)]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("λ=1: FAILED"), "{out}");
    assert!(out.contains("divisibility_ok=true"));
    assert!(!out.contains("missing=0\n"));
    assert!(!out.contains("repeated=0\n"));
}

#[test]
fn verify_family_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("garbage.txt");
    fs::write(&path, "this is not a family\n").unwrap();
    let o = steiner(&["verify-family", p(&path)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    fs::write(&path, "group Z17xZ17\nk 3\n00 00 01\n").unwrap();
    let o = steiner(&["verify-family", p(&path)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3, column 4"));

    assert_eq!(code(&steiner(&["verify-family", "--fixture", "nonexistent"])), 2);
    assert_eq!(code(&steiner(&["verify-family", "/no/such/file"])), 2);
    assert_eq!(code(&steiner(&["verify-family"])), 2);
}

#[test]
fn verify_family_json() {
    let o = steiner(&["verify-family", "--fixture", "s2-9-289-1717-2", "--json"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["is_family"], true);
    assert_eq!(doc["covered_once"], 288);
    assert_eq!(doc["group"], "Z17xZ17");
}

#[test]
fn develop_and_verify_design() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.design");
    let o = steiner(&["develop", "--fixture", "s2-9-289-1717-1", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "v=289 k=9 b=1156");
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 2 + 1156);

    let o = steiner(&["verify-design", p(&out)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("pairs covered once: 41616/41616"), "{text}");
    assert!(text.contains("replication: min=36 max=36"));

    let o = steiner(&["develop", "--fixture", "s2-8-225-g3355-2", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "v=225 k=8 b=900");
}

#[test]
fn verify_design_with_deleted_block() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.design");
    assert_eq!(
        code(&steiner(&["develop", "--fixture", "s2-8-225-g3355-1", "--out", p(&out)])),
        0
    );
    let text = fs::read_to_string(&out).unwrap();
    let o = steiner(&["verify-design", p(&out)]);
    assert!(stdout(&o).contains("pairs covered once: 25200/25200"));

    let mut lines: Vec<&str> = text.lines().collect();
    lines.remove(2);
    fs::write(&out, lines.join("\n") + "\n").unwrap();
    let o = steiner(&["verify-design", p(&out)]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("multiplicity 0: 28 pairs"), "{text}");
    assert!(text.contains("pairs covered once: 25172/25200"));
}

#[test]
fn verify_design_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.design");
    fs::write(&path, "v 225\nk 8\n0 1 2 3 4 5 6 225\n").unwrap();
    let o = steiner(&["verify-design", p(&path)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of range"));
}

#[test]
fn develop_rejects_divisibility() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.df");
    fs::write(&path, "group Z7\nk 3\n0 1 3\n0 2 6\n").unwrap();
    assert_eq!(code(&steiner(&["develop", p(&path)])), 1);
}

#[test]
fn pipeline_closure_for_all_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for name in list_fixtures() {
        let design = dir.path().join(format!("{name}.design"));
        assert_eq!(code(&steiner(&["verify-family", "--fixture", name])), 0, "{name}");
        assert_eq!(
            code(&steiner(&["develop", "--fixture", name, "--out", p(&design)])),
            0
        );
        assert_eq!(code(&steiner(&["verify-design", p(&design)])), 0, "{name}");
    }
}

#[test]
fn search_writes_verifiable_family() {
    let dir = tempfile::tempdir().unwrap();
    for (group, k, b, seed) in [("Z13", "4", "1", "7"), ("Z21", "5", "1", "7"), ("Z5xZ5", "4", "2", "3")] {
        let out = dir.path().join(format!("{group}.df"));
        let o = steiner(&[
            "search", "--group", group, "--k", k, "--blocks", b, "--seed", seed, "--out", p(&out),
        ]);
        assert_eq!(code(&o), 0, "{group}");
        assert!(stdout(&o).contains("found=true"));
        assert_eq!(code(&steiner(&["verify-family", p(&out)])), 0, "{group}");
    }
}

#[test]
fn search_exit_codes() {
    assert_eq!(code(&steiner(&["search", "--group", "Z7", "--k", "3", "--blocks", "2"])), 2);
    assert_eq!(code(&steiner(&["search", "--group", "Z1", "--k", "3", "--blocks", "1"])), 2);
    // No (25,4,1) family over Z25: exhaustion is exit 1.
    let o = steiner(&["search", "--group", "Z25", "--k", "4", "--blocks", "2", "--no-shuffle"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("terminated_by=restarts-exhausted"));
}

#[test]
fn search_to_stdout_and_json_stats() {
    let dir = tempfile::tempdir().unwrap();
    let stats = dir.path().join("stats.json");
    let o = steiner(&[
        "search", "--group", "Z13", "--k", "3", "--blocks", "2", "--stats-out", p(&stats),
        "--stats-format", "json",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("group Z13\nk 3\n"));
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&stats).unwrap()).unwrap();
    assert_eq!(doc["found"], true);
    assert_eq!(doc["terminated_by"], "found");
    assert_eq!(doc["family"], stdout(&o));
}

#[test]
fn multi_worker_search() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.df");
    let o = steiner(&[
        "search", "--group", "Z31", "--k", "6", "--blocks", "1", "--workers", "3", "--out", p(&out),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&steiner(&["verify-family", p(&out)])), 0);
}

#[test]
fn info_outputs() {
    let o = steiner(&["info", "--params", "225", "8"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "b=900 r=32 feasible"));
    let o = steiner(&["info", "--params", "289", "9"]);
    assert_eq!(stdout(&o).trim(), "b=1156 r=36 feasible");
    let o = steiner(&["info", "--group", "Z3xZ3xZ5xZ5"]);
    assert_eq!(stdout(&o).trim(), "order 225, factors 3,3,5,5");
    let o = steiner(&["info", "--params", "8", "3"]);
    assert_eq!(stdout(&o).trim(), "infeasible");
    assert_eq!(code(&steiner(&["info", "--params", "3", "5"])), 2);
    assert_eq!(code(&steiner(&["info"])), 2);
    assert_eq!(code(&steiner(&["info", "--group", "Z1"])), 2);
}

#[test]
fn fixtures_list_and_export() {
    let o = steiner(&["fixtures"]);
    assert_eq!(stdout(&o).lines().count(), 10);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.df");
    let o = steiner(&["fixtures", "--export", "s2-9-289-1717-4", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let f = fixture("s2-9-289-1717-4").unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap(), format_family(&f.family));
    assert_eq!(code(&steiner(&["verify-family", p(&out)])), 0);
}
