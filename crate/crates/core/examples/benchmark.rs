// Multi-seed experiment over several files, written as CSV and JSON.
//
//     cargo run --release --example benchmark -- 10 gtsplib/30kroA150.gtsp gtsplib/31pr152.gtsp

use std::path::PathBuf;

use gtsp_dsta::bench::{emit_report, run_experiment, write_summary_csv, SolverKind};
use gtsp_dsta::{ExperimentConfig, RunReport, SolverConfig, Termination};

pub fn run(files: &[PathBuf], runs: usize, termination: Termination) -> Vec<RunReport> {
    let cfg = ExperimentConfig {
        dsta: SolverConfig {
            termination,
            ..SolverConfig::default()
        },
        solvers: vec![SolverKind::Dsta, SolverKind::Sa],
        runs,
        match_sa_time: true,
        ..ExperimentConfig::default()
    };
    let exp = run_experiment(files, &cfg);
    for (path, err) in &exp.failures {
        println!("skipped {}: {err}", path.display());
    }
    write_summary_csv(&exp.reports, std::io::stdout()).unwrap();
    let prefix = std::env::temp_dir().join("gtsp-bench");
    let (csv, json) = emit_report(&exp.reports, &prefix).unwrap();
    println!("wrote {} and {}", csv.display(), json.display());
    exp.reports
}

#[allow(dead_code)]
fn main() {
    let mut args = std::env::args().skip(1);
    let runs = args.next().map_or(3, |r| r.parse().expect("runs"));
    let mut files: Vec<PathBuf> = args.map(PathBuf::from).collect();
    if files.is_empty() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data/instances");
        files = ["30synth150.gtsp", "31synth152.gtsp"]
            .iter()
            .map(|f| PathBuf::from(dir).join(f))
            .collect();
    }
    run(&files, runs, SolverConfig::default().termination);
}
