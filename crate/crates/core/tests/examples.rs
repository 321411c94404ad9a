//! Runs every example with small inputs so they cannot rot.

use std::path::PathBuf;

use gtsp_dsta::Termination;

mod generate_instance {
    include!("../examples/generate_instance.rs");
}
mod load_instance {
    include!("../examples/load_instance.rs");
}
mod neighbor_table {
    include!("../examples/neighbor_table.rs");
}
mod transformations {
    include!("../examples/transformations.rs");
}
mod cluster_optimization {
    include!("../examples/cluster_optimization.rs");
}
mod solve_dsta {
    include!("../examples/solve_dsta.rs");
}
mod sa_vs_dsta {
    include!("../examples/sa_vs_dsta.rs");
}
mod benchmark {
    include!("../examples/benchmark.rs");
}
mod oracle_check {
    include!("../examples/oracle_check.rs");
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data/instances")
        .join(name)
}

#[test]
fn generate_instance_matches_bundled_file() {
    let text = generate_instance::run(150, 30, 7);
    assert_eq!(
        text,
        std::fs::read_to_string(data("30synth150.gtsp")).unwrap()
    );
}

#[test]
fn load_instance_reads_bundled_files() {
    let inst = load_instance::run(data("30synth150.gtsp"));
    assert_eq!((inst.n(), inst.m()), (150, 30));
    let inst = load_instance::run(data("choice3.gtsp"));
    assert_eq!(inst.edge_cost(2, 3).unwrap(), 9);
}

#[test]
fn neighbor_table_lists_k_entries() {
    let nm = neighbor_table::run(data("31synth152.gtsp"), 8);
    assert!(nm.table().iter().all(|row| row.len() == 8));
}

#[test]
fn transformations_keep_every_cluster() {
    let orders = transformations::run();
    assert_eq!(orders[0], vec![1, 5, 3, 4, 2, 6, 7, 8]);
    for o in orders {
        let mut s = o.clone();
        s.sort_unstable();
        assert_eq!(s, (1..=8).collect::<Vec<_>>());
    }
}

#[test]
fn cluster_optimization_fixture() {
    assert_eq!(cluster_optimization::run(data("choice3.gtsp")), (11, 3, 3));
}

#[test]
fn solve_dsta_short_run() {
    let r = solve_dsta::run(data("30synth150.gtsp"), 1, Termination::rounds(30));
    assert_eq!(r.rounds, 30);
}

#[test]
fn sa_vs_dsta_short_budget() {
    let (d, s) = sa_vs_dsta::run(data("30synth150.gtsp"), 0.2, 2);
    assert_eq!((d.len(), s.len()), (2, 2));
}

#[test]
fn benchmark_reports_both_solvers() {
    let files = [data("triangle3.gtsp"), data("missing.gtsp")];
    let reports = benchmark::run(&files, 2, Termination::rounds(5));
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r.best == 12 && r.runs.len() == 2));
}

#[test]
fn oracle_check_small() {
    let (hits, total) = oracle_check::run(3, 2);
    assert_eq!(total, 6);
    assert!(hits <= total);
}
