// One seeded run of the state transition search, with its trace.
//
//     cargo run --release --example solve_dsta -- path/to/31pr152.gtsp 3

use std::path::PathBuf;

use gtsp_dsta::dsta::write_trace_csv;
use gtsp_dsta::{is_valid_tour, solve, Instance, RunResult, SolverConfig, Termination};

pub fn run(path: PathBuf, seed: u64, termination: Termination) -> RunResult {
    let inst = Instance::from_file(&path).unwrap_or_else(|e| panic!("{e}"));
    let cfg = SolverConfig {
        seed,
        termination,
        ..SolverConfig::default()
    };
    let result = solve(&inst, &cfg).expect("valid config");
    is_valid_tour(&inst, &result.tour).expect("solver returns a valid tour");
    println!(
        "{}: cost {} after {} rounds, {:.2}s",
        inst.name(),
        result.cost,
        result.rounds,
        result.elapsed.as_secs_f64()
    );
    println!("tour {}", result.tour);

    // last improvement of the historical best, per operator
    let mut last = None;
    for row in &result.trace {
        if last.is_none_or(|c| row.best_star_cost < c) {
            last = Some(row.best_star_cost);
            println!(
                "  round {:>5} {:<10} -> {}",
                row.round, row.operator, row.best_star_cost
            );
        }
    }
    let trace = std::env::temp_dir().join(format!("{}-trace.csv", inst.name()));
    write_trace_csv(&result.trace, std::fs::File::create(&trace).unwrap()).unwrap();
    println!("trace written to {}", trace.display());
    result
}

#[allow(dead_code)]
fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/instances/31synth152.gtsp"
        ))
    });
    let seed = args.next().map_or(1, |s| s.parse().expect("seed"));
    run(path, seed, SolverConfig::default().termination);
}
