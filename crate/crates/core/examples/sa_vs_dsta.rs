// Both solvers on the same instance with the same wall-clock budget.
//
//     cargo run --release --example sa_vs_dsta -- path/to/46pr226.gtsp 5

use std::path::PathBuf;
use std::time::Duration;

use gtsp_dsta::{sa_solve, solve, Instance, SaConfig, SolverConfig, Termination};

pub fn run(path: PathBuf, seconds: f64, seeds: u64) -> (Vec<i64>, Vec<i64>) {
    let inst = Instance::from_file(&path).unwrap_or_else(|e| panic!("{e}"));
    let budget = Termination::time(Duration::from_secs_f64(seconds));
    let mut dsta = Vec::new();
    let mut sa = Vec::new();
    for seed in 1..=seeds {
        let d = solve(
            &inst,
            &SolverConfig {
                seed,
                termination: budget,
                ..SolverConfig::default()
            },
        )
        .unwrap();
        let s = sa_solve(
            &inst,
            &SaConfig {
                seed,
                termination: budget,
                ..SaConfig::default()
            },
        )
        .unwrap();
        println!("seed {seed}: dsta {:>7}  sa {:>7}", d.cost, s.cost);
        dsta.push(d.cost);
        sa.push(s.cost);
    }
    let mean = |v: &[i64]| v.iter().sum::<i64>() as f64 / v.len() as f64;
    println!(
        "{} with {seconds}s per run: dsta mean {:.1}, sa mean {:.1}",
        inst.name(),
        mean(&dsta),
        mean(&sa)
    );
    (dsta, sa)
}

#[allow(dead_code)]
fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/instances/46synth226.gtsp"
        ))
    });
    let seconds = args.next().map_or(2.0, |s| s.parse().expect("seconds"));
    run(path, seconds, 3);
}
