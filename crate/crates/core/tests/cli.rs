mod common;

use std::process::{Command, Output};

use common::data_dir;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtsp-dsta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    data_dir().join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cli(&[]).status.code(), Some(1));
    assert_eq!(cli(&["solve"]).status.code(), Some(1));
    assert_eq!(cli(&["solve", "x", "--bogus"]).status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    assert_eq!(cli(&["--version"]).status.code(), Some(0));
}

#[test]
fn solve_prints_tour_line() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let o = cli(&[
        "solve",
        &data("triangle3.gtsp"),
        "--max-rounds",
        "3",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("12;"), "{}", stdout(&o));
    let text = std::fs::read_to_string(trace).unwrap();
    assert!(text.starts_with("round,operator,best_cost,best_star_cost,elapsed_ms\n"));
    // swap, shift and k-shift are the operators that fit three clusters
    assert_eq!(text.lines().count(), 1 + 3 * 3);
}

#[test]
fn solve_rejects_bad_config() {
    let o = cli(&["solve", &data("triangle3.gtsp"), "--p1", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unreadable_or_malformed_input_exits_two() {
    assert_eq!(cli(&["solve", "/nonexistent.gtsp"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.gtsp");
    std::fs::write(&bad, "NAME: bad\nTYPE: GTSP\nDIMENSION: x\n").unwrap();
    let o = cli(&["oracle", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn oracle_solves_and_guards() {
    let o = cli(&["oracle", &data("choice3.gtsp")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("3"));
    let o = cli(&["oracle", &data("30synth150.gtsp")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn neighbors_lists_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("p.csv");
    let o = cli(&[
        "neighbors",
        &data("collinear3.gtsp"),
        "--k",
        "1",
        "--dump-p",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    // cluster 1 relates most to cluster 2, and cluster 3 to cluster 2
    assert_eq!(stdout(&o), "1: 2\n2: 1\n3: 2\n");
    let p = std::fs::read_to_string(dump).unwrap();
    assert!(p.starts_with(",1,2,3\n"));
    assert_eq!(p.lines().count(), 4);
}

#[test]
fn bench_writes_reports_and_keeps_going() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("out");
    let o = cli(&[
        "bench",
        &data("triangle3.gtsp"),
        "/nonexistent.gtsp",
        &data("tiny4.gtsp"),
        "--runs",
        "2",
        "--solver",
        "both",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "instance,solver,opt,best,delta_avg,t_avg");
    assert_eq!(rows.len(), 5);
    assert!(rows[1].starts_with("triangle3,dsta,,12,,"));
    assert!(rows[2].starts_with("triangle3,sa,,12,,"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(prefix.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
    assert_eq!(json[0]["runs"].as_array().unwrap().len(), 2);
}
