// Exhaustive optimum versus the solver on random tiny instances.

use gtsp_dsta::{brute_force_oracle, generate, solve, SolverConfig, Termination};

/// Returns (hits, attempts).
pub fn run(instances: u64, seeds: u64) -> (usize, usize) {
    let mut hits = 0;
    let mut total = 0;
    for i in 0..instances {
        let inst = generate::tiny(4 + (i % 4) as usize, 3, 1000 + i);
        let (opt, tour) = brute_force_oracle(&inst).unwrap();
        let mut found = 0;
        for seed in 0..seeds {
            let cfg = SolverConfig {
                seed,
                termination: Termination::stall(200),
                ..SolverConfig::default()
            };
            let r = solve(&inst, &cfg).unwrap();
            assert!(r.cost >= opt);
            found += usize::from(r.cost == opt);
        }
        println!(
            "{:<12} m={} optimum {:>4} ({}) found {found}/{seeds}",
            inst.name(),
            inst.m(),
            opt,
            tour.to_line()
        );
        hits += found;
        total += seeds as usize;
    }
    println!("{hits}/{total} runs reached the optimum");
    (hits, total)
}

#[allow(dead_code)]
fn main() {
    run(10, 5);
}
