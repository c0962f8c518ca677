//! The `dualcheck` binary: exit codes, output formats and report determinism.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn dualcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualcheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    dualcheck(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_slice(&dualcheck(&full).stdout).expect("json output")
}

#[test]
fn check_examples() {
    assert_eq!(code(&["check", "quasi-primal", "corpus:X2"]), 0);
    assert_eq!(code(&["check", "semi-primal", "corpus:A2"]), 0);
    let v = json(&["check", "quasi-primal", "corpus:C2-algebra"]);
    assert_eq!(v["result"]["verdict"]["outcome"], "no");
    assert_eq!(v["result"]["verdict"]["witness"]["kind"], "bad_subuniverse");
    assert_eq!(code(&["check", "quasi-primal", "corpus:C2-algebra"]), 1);
}

#[test]
fn internal_and_ddp() {
    let v = json(&["check", "internal", "corpus:X1", "corpus:X2", "corpus:X3", "--term", "f^2 g"]);
    assert_eq!(v["result"]["verdict"]["outcome"], "yes");
    let unmet = json(&["check", "internal", "corpus:C2", "--term", "g"]);
    assert_eq!(unmet["result"]["verdict"]["outcome"], "condition_not_met");
    assert_eq!(code(&["check", "internal", "corpus:C2", "--term", "g"]), 0);
    assert_eq!(code(&["--strict", "check", "internal", "corpus:C2", "--term", "g"]), 1);
    assert_eq!(code(&["check", "ddp", "corpus:crown4", "corpus:chain2"]), 0);
    assert_eq!(code(&["check", "ddp", "corpus:chain3"]), 1);
    assert_eq!(code(&["check", "ddp", "corpus:antichain2"]), 1);
    assert_eq!(code(&["check", "simple", "corpus:chain2"]), 0);
    assert_eq!(code(&["check", "simple", "corpus:fixed_f_plus"]), 1);
    assert_eq!(code(&["check", "simple", "corpus:swap_f_plus"]), 0);
}

#[test]
fn strict_flag() {
    let args = ["--guard-product", "4", "check", "quasi-primal", "corpus:C3", "--term", "eps"];
    let v = json(&args);
    assert_eq!(v["result"]["verdict"]["outcome"], "unknown_guard");
    assert_eq!(code(&args), 0);
    let mut strict = vec!["--strict"];
    strict.extend_from_slice(&args);
    assert_eq!(code(&strict), 3);
}

#[test]
fn input_errors() {
    assert_eq!(code(&["check", "simple", "corpus:nope"]), 2);
    assert_eq!(code(&["check", "simple", "/nonexistent/file.txt"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    let mut file = tempfile_path("cycle");
    writeln!(file.1, "poset P\npoints: a b\norder: a<b, b<a").unwrap();
    let out = dualcheck(&["check", "simple", file.0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("line 3"));
    let mut bad = tempfile_path("polarity");
    writeln!(bad.1, "space S\nsignature: f+\npoints: a b\norder: a<b\nmap f: a->b b->a").unwrap();
    assert_eq!(code(&["dualize", bad.0.to_str().unwrap()]), 2);
}

fn tempfile_path(tag: &str) -> (std::path::PathBuf, std::fs::File) {
    let path = std::env::temp_dir().join(format!("dualcheck-{}-{tag}.txt", std::process::id()));
    let f = std::fs::File::create(&path).unwrap();
    (path, f)
}

#[test]
fn dualize_round_trip_through_files() {
    let out = dualcheck(&["dualize", "corpus:Y2"]);
    assert_eq!(out.status.code(), Some(0));
    let algebra = String::from_utf8(out.stdout).unwrap();
    assert!(algebra.starts_with("algebra E_Y2\n"));
    let (path, mut f) = tempfile_path("e_y2");
    f.write_all(algebra.as_bytes()).unwrap();
    let back = dualcheck(&["dualize", "--direction", "d", path.to_str().unwrap()]);
    assert_eq!(back.status.code(), Some(0));
    let space = String::from_utf8(back.stdout).unwrap();
    assert!(space.contains("signature: f+ g-"));
    assert!(space.contains("points: up_top up_u2") || space.contains("points: up_u2 up_top"));
    assert_eq!(code(&["dualize", "--direction", "d", "corpus:Y2"]), 2);
}

#[test]
fn reports_are_deterministic() {
    let a = json(&["check", "quasi-primal", "corpus:X2"]);
    let b = json(&["check", "quasi-primal", "corpus:X2"]);
    assert_eq!(a["digest"], b["digest"]);
    assert_eq!(a["schema"], "dualcheck-report/1");
    assert_eq!(
        a["digest"].as_str().unwrap(),
        dualcheck_core::report::recompute_digest(&a)
    );
    assert_eq!(a["structures"][0]["name"], "X2");
}

#[test]
fn text_output_renders_the_json_result() {
    let out = dualcheck(&["check", "quasi-primal", "corpus:X2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("outcome: yes"));
    assert!(text.contains("route: brute_force"));
}

#[test]
fn even_cycle_witness_documents() {
    let out = dualcheck(&["witness", "even-cycle", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("space C4\n"));
    assert!(text.contains("# phi1: "));
    assert_eq!(code(&["witness", "even-cycle", "3"]), 2);
}

#[test]
fn corpus_commands() {
    let list = String::from_utf8(dualcheck(&["corpus", "list"]).stdout).unwrap();
    for name in ["X1", "X2", "X3", "A4", "C6", "C2-algebra"] {
        assert!(list.lines().any(|l| l == name), "{name}");
    }
    let shown = String::from_utf8(dualcheck(&["corpus", "show", "X2"]).stdout).unwrap();
    assert!(shown.contains("map g: u->w v->v w->u"));
}
