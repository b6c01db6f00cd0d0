//! End-to-end tests of the command-line binary: exit codes, output shapes,
//! canonical (byte-stable) serialization, and the golden corpus fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maxdet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("maxdet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gen(fixture: &[&str], name: &str) -> PathBuf {
    let path = tmp(name);
    let mut args = vec!["gen"];
    args.extend_from_slice(fixture);
    args.push(path.to_str().unwrap());
    let out = run(&args);
    assert!(out.status.success(), "gen failed: {:?}", out);
    path
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn eval_prints_values_and_undefined() {
    let fig1 = gen(&["fig1-left", "2"], "fig1.json");
    let out = run(&["eval", fig1.to_str().unwrap(), "ab"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");
    let out = run(&["eval", fig1.to_str().unwrap(), "a"]);
    assert_eq!(stdout(&out).trim(), "undefined");
    // Unknown symbol: exit 2 with a message.
    let out = run(&["eval", fig1.to_str().unwrap(), "az"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn decide_exit_codes() {
    let fig3 = gen(&["fig3"], "fig3.json");
    assert_eq!(run(&["decide", "regret", "1", fig3.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["decide", "regret", "0", fig3.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["decide", "zerodelay", fig3.to_str().unwrap()]).status.code(), Some(0));
    let jpair = gen(&["jpair", "2"], "jpair.json");
    assert_eq!(run(&["decide", "kdelay", "2", jpair.to_str().unwrap()]).status.code(), Some(1));
    // Parse failure: exit 2.
    let bad = tmp("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["decide", "zerodelay", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn decide_with_witness_and_verify() {
    let fig3 = gen(&["fig3"], "fig3-w.json");
    let witness = tmp("fig3-witness.json");
    let report = tmp("fig3-report.json");
    let out = run(&[
        "decide",
        "regret",
        "1",
        fig3.to_str().unwrap(),
        "--witness",
        witness.to_str().unwrap(),
        "--verify",
        "6",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let printed = stdout(&out);
    assert!(printed.starts_with("yes"));
    assert!(printed.contains("verify"));
    assert!(witness.exists());
    let report_text = std::fs::read_to_string(&report).unwrap();
    assert!(report_text.contains("\"answer\": \"yes\""));
    assert!(report_text.contains("checks"));
}

#[test]
fn transform_roundtrip_is_byte_stable() {
    let fig1 = gen(&["fig1-left", "2"], "fig1-t.json");
    let out1 = tmp("fig1-pairdet-1.json");
    let out2 = tmp("fig1-pairdet-2.json");
    assert!(run(&["transform", "pairdet", fig1.to_str().unwrap(), out1.to_str().unwrap()]).status.success());
    assert!(run(&["transform", "pairdet", fig1.to_str().unwrap(), out2.to_str().unwrap()]).status.success());
    let (a, b) = (std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
    assert_eq!(a, b, "same inputs must give byte-identical outputs");
    // Round-trip through parse/serialize is the identity on canonical files.
    let trimmed = tmp("fig1-trim.json");
    assert!(run(&["transform", "trim", out1.to_str().unwrap(), trimmed.to_str().unwrap()]).status.success());
    let again = tmp("fig1-trim-2.json");
    assert!(run(&["transform", "trim", trimmed.to_str().unwrap(), again.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&trimmed).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn transform_delay_zero_preserves_values() {
    let fig3 = gen(&["fig3"], "fig3-d.json");
    let delayed = tmp("fig3-delay0.json");
    assert!(run(&["transform", "delay", "0", fig3.to_str().unwrap(), delayed.to_str().unwrap()])
        .status
        .success());
    let out = run(&["oracle", "equiv", fig3.to_str().unwrap(), delayed.to_str().unwrap(), "--horizon", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "pass");
}

#[test]
fn transform_bounded_determinization_is_equivalent() {
    let fig3 = gen(&["fig3"], "fig3-b.json");
    let det = tmp("fig3-bounddet.json");
    assert!(run(&["transform", "bounddet", "8", fig3.to_str().unwrap(), det.to_str().unwrap()])
        .status
        .success());
    let out = run(&["oracle", "equiv", fig3.to_str().unwrap(), det.to_str().unwrap(), "--horizon", "6"]);
    assert_eq!(stdout(&out).trim(), "pass");
}

#[test]
fn strategy_file_feeds_the_regret_oracle() {
    let fig3 = gen(&["fig3"], "fig3-strat.json");
    let strategy = tmp("fig3-strategy.json");
    let out = run(&[
        "decide",
        "regret",
        "1",
        fig3.to_str().unwrap(),
        "--strategy",
        strategy.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(strategy.exists());
    let out = run(&["oracle", "regret", fig3.to_str().unwrap(), strategy.to_str().unwrap(), "--horizon", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn egr_commands() {
    let arena = gen(&["egr-example"], "egr.json");
    let out = run(&["egr", "solve", "v0", "2", arena.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "eve");
    let out = run(&["egr", "solve", "v0", "1", arena.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "adam");
    let out = run(&["egr", "mincredit", "v0", arena.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "2");
    let out = run(&["egr", "region", arena.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "v0\nv1\nv2");
    // An arena with a sink is rejected with exit 2.
    let sink = tmp("sink.json");
    std::fs::write(
        &sink,
        r#"{"version":1,"vertices":[{"name":"v","owner":"eve"}],"edges":[]}"#,
    )
    .unwrap();
    let out = run(&["egr", "region", sink.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sink"));
}

#[test]
fn gen_matches_golden_files() {
    for (fixture, file) in [
        (vec!["fig1-left", "2"], "fig1-left-k2.json"),
        (vec!["fig1-right", "2"], "fig1-right-k2.json"),
        (vec!["fig3"], "fig3.json"),
        (vec!["jpair", "2"], "jpair2.json"),
        (vec!["quadregret", "2"], "quadregret2.json"),
        (vec!["maxab"], "maxab.json"),
        (vec!["egr-example"], "egr-example.json"),
    ] {
        let produced = gen(&fixture, &format!("golden-{file}"));
        let expected = std::fs::read(golden(file)).unwrap();
        assert_eq!(
            std::fs::read(&produced).unwrap(),
            expected,
            "fixture {fixture:?} drifted from its golden file"
        );
    }
}

#[test]
fn gen_jpair_state_count() {
    let jpair = gen(&["jpair", "2"], "jpair-count.json");
    let text = std::fs::read_to_string(&jpair).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["states"].as_array().unwrap().len(), 7);
}

#[test]
fn oracle_commands() {
    let fig1 = gen(&["fig1-left", "2"], "fig1-o.json");
    let right = gen(&["fig1-right", "2"], "fig1r-o.json");
    let out = run(&["oracle", "value", fig1.to_str().unwrap(), "ab"]);
    assert_eq!(stdout(&out).trim(), "1");
    let out = run(&["oracle", "mindelay", right.to_str().unwrap(), fig1.to_str().unwrap(), "--horizon", "5"]);
    assert_eq!(stdout(&out).trim(), "2");
    let out = run(&["oracle", "boundcheck", right.to_str().unwrap(), "0", "--horizon", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let arena = gen(&["egr-example"], "egr-o.json");
    let out = run(&["oracle", "egr", arena.to_str().unwrap(), "v0", "2"]);
    assert_eq!(stdout(&out).trim(), "eve");
}

#[test]
fn semidet_reports_found_k() {
    let fig1 = gen(&["fig1-left", "2"], "fig1-s.json");
    let out = run(&["decide", "semidet", "3", fig1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("yes"));
    assert!(text.contains("k = 2"));
}

#[test]
fn dot_renders_both_kinds() {
    let fig3 = gen(&["fig3"], "fig3-dot.json");
    let out = run(&["dot", fig3.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("digraph automaton"));
    let arena = gen(&["egr-example"], "egr-dot.json");
    let out = run(&["dot", arena.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("digraph arena"));
}
