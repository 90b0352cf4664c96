//! End-to-end CLI checks: exit codes, JSON stability, file loading and
//! cross-file audit resolution.

use std::path::PathBuf;
use std::process::{Command, Output};

fn erasim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erasim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("erasim-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn list_names_every_builtin() {
    let out = erasim(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["bs-single", "epr-bs", "penrose-reverse", "epr-bs-both",
                 "eraser-contingent", "eraser-filtered", "eraser-whichpath"] {
        assert!(text.lines().any(|l| l == name), "missing {name} in: {text}");
    }
}

#[test]
fn run_builtin_text_report() {
    let out = erasim(&["run", "--builtin", "epr-bs"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("scenario epr-bs"));
    assert!(text.contains("p=0.25"));
    assert!(text.contains("cut-invariance"));
    assert!(text.contains("pass"));
}

#[test]
fn run_json_is_byte_stable_across_invocations() {
    let once = erasim(&["run", "--builtin", "eraser-contingent", "--json"]);
    let twice = erasim(&["run", "--builtin", "eraser-contingent", "--json"]);
    assert_eq!(once.status.code(), Some(0), "stderr: {}", stderr(&once));
    assert_eq!(once.stdout, twice.stdout);
    let text = stdout(&once);
    assert!(text.starts_with("{\"scenario\":\"eraser-contingent\""));
    assert!(text.trim_end().ends_with('}'));
    assert!(text.contains("\"kind\":\"filter-equivalence\""));
}

#[test]
fn run_with_condition_filters_the_distribution() {
    let out = erasim(&[
        "run", "--builtin", "eraser-contingent", "--json", "--condition", "D==s0=1,s1=0",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    // gated runs always erase to the i1 port
    assert!(text.contains("\"record\":{\"D\":\"s0=1,s1=0\",\"U\":\"i0=0,i1=1\"},\"p\":1"));
    assert!(text.contains("\"discarded_weight\":0.5"));
}

#[test]
fn retro_audit_value_shows_up_in_json() {
    let out = erasim(&["run", "--builtin", "penrose-reverse", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"kind\":\"retro\",") && stdout(&out).contains("\"value\":0.5"));
}

#[test]
fn audit_subcommand_filters_by_kind() {
    let out = erasim(&["audit", "--builtin", "epr-bs-both", "--kind", "consistency"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.contains("consistency") && l.contains("pass")));

    let missing = erasim(&["audit", "--builtin", "epr-bs-both", "--kind", "no-signaling"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn file_scenarios_load_and_reference_siblings() {
    let dir = temp_dir("files");
    // a local pair: conditioned protocol plus its unconditional filter twin
    let switch = "\
modes a b c d
state 1/sqrt2 |a=1,b=0,c=1,d=0> + 1/sqrt2 |a=0,b=1,c=0,d=1>
step bs a b
step measure a b as D
step if D == a=1,b=0 then bs c d
step measure c d as U
wing left: a b
wing right: c d
audit filter-equivalence twin D==a=1,b=0
";
    let twin = "\
modes a b c d
state 1/sqrt2 |a=1,b=0,c=1,d=0> + 1/sqrt2 |a=0,b=1,c=0,d=1>
step bs a b
step measure a b as D
step bs c d
step measure c d as U
wing left: a b
wing right: c d
";
    std::fs::write(dir.join("switch.scn"), switch).unwrap();
    std::fs::write(dir.join("twin.scn"), twin).unwrap();
    let out = erasim(&["run", dir.join("switch.scn").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("filter-equivalence"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = temp_dir("badparse");
    std::fs::write(dir.join("bad.scn"), "modes g0 g1\nstate 1 |g0=1,g1=0>\nstep bs g0\n").unwrap();
    let out = erasim(&["run", dir.join("bad.scn").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stderr(&out);
    assert!(text.contains("line 3"), "stderr: {text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_builtin_exits_2_and_lists_names() {
    let out = erasim(&["run", "--builtin", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("penrose-reverse"));
}

#[test]
fn failing_audit_exits_1() {
    let dir = temp_dir("failaudit");
    // interference makes this event's probability 1/2, far beyond tolerance
    let doc = "\
modes g0 g1
state 1 |g0=1,g1=0>
step bs g0 g1
step measure g0 g1 as D
audit consistency D==g0=1,g1=0
";
    std::fs::write(dir.join("failing.scn"), doc).unwrap();
    let out = erasim(&["run", dir.join("failing.scn").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("FAIL"));
    // a loose tolerance turns the same audit into a pass
    let loose = erasim(&["run", dir.join("failing.scn").to_str().unwrap(), "--tol", "0.6"]);
    assert_eq!(loose.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn show_prints_scenario_source() {
    let out = erasim(&["show", "eraser-filtered"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("scenario eraser-filtered"));
}
