//! Simulated annealing baseline over unguided swap and shift moves.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::cluster_opt::short_co_in_place;
use crate::dsta::{initial_tour, substream, RunResult, SolverError, Termination, TraceRow};
use crate::instance::Instance;
use crate::operators::{apply_move, sample_shift, sample_swap};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaConfig {
    pub t0: f64,
    /// Temperature multiplier applied after every epoch of `m` moves.
    pub cooling: f64,
    pub m_a: usize,
    pub m_b: usize,
    pub seed: u64,
    /// Rounds here are epochs.
    pub termination: Termination,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig {
            t0: 5000.0,
            cooling: 0.97,
            m_a: 2,
            m_b: 1,
            seed: 0,
            termination: Termination::default(),
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(SolverError::InvalidConfig("t0 must be positive".into()));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(SolverError::InvalidConfig(
                "cooling must lie in (0, 1)".into(),
            ));
        }
        if self.m_a < 2 || self.m_b == 0 {
            return Err(SolverError::InvalidConfig(
                "m_a >= 2 and m_b >= 1 required".into(),
            ));
        }
        if !self.termination.is_active() {
            return Err(SolverError::NoTermination);
        }
        Ok(())
    }
}

/// Metropolis acceptance probability of a cost change `delta` at
/// temperature `temp`.
pub fn acceptance(delta: i64, temp: f64) -> f64 {
    if delta <= 0 {
        1.0
    } else {
        (-(delta as f64) / temp).exp()
    }
}

pub fn sa_solve(inst: &Instance, cfg: &SaConfig) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    let started = Instant::now();
    let m = inst.m();
    let mut current = initial_tour(inst, &mut substream(cfg.seed, 0));
    let mut best = current.clone();
    let mut temp = cfg.t0;
    let mut trace = Vec::new();
    let mut epoch = 0;
    let mut last_improvement = 0;
    loop {
        epoch += 1;
        if m >= 2 {
            let mut rng = substream(cfg.seed, epoch);
            for _ in 0..m {
                let mv = if m >= 3 && rng.random_bool(0.5) {
                    sample_shift(m, cfg.m_b, &mut rng)
                } else {
                    sample_swap(m, cfg.m_a, &mut rng)
                };
                let mut c = apply_move(inst, &current, &mv);
                short_co_in_place(inst, &mut c.tour, &c.changed);
                let delta = c.tour.cost() - current.cost();
                let p = acceptance(delta, temp);
                if p >= 1.0 || rng.random::<f64>() < p {
                    current = c.tour;
                    if current.cost() < best.cost() {
                        best = current.clone();
                        last_improvement = epoch;
                    }
                }
            }
        }
        trace.push(TraceRow {
            round: epoch,
            operator: "sa-epoch",
            best_cost: current.cost(),
            best_star_cost: best.cost(),
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        });
        temp *= cfg.cooling;
        if m < 2
            || cfg
                .termination
                .reached(epoch, epoch - last_improvement, started.elapsed())
        {
            break;
        }
    }
    Ok(RunResult {
        cost: best.cost(),
        tour: best,
        rounds: epoch,
        elapsed: started.elapsed(),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::WeightKind;
    use crate::tour::is_valid_tour;
    use rand::SeedableRng;

    fn scatter(seed: u64) -> Instance {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let coords = (0..40)
            .map(|_| (rng.random_range(0.0..500.0), rng.random_range(0.0..500.0)))
            .collect();
        let clusters = (0..10).map(|c| (c * 4..c * 4 + 4).collect()).collect();
        Instance::from_coords("s", WeightKind::Euc2d, coords, clusters).unwrap()
    }

    #[test]
    fn zero_delta_is_always_accepted() {
        assert_eq!(acceptance(0, 1e-9), 1.0);
        assert_eq!(acceptance(-5, 1.0), 1.0);
        assert!((acceptance(10, 10.0) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn frozen_temperature_is_descent() {
        let inst = scatter(5);
        let cfg = SaConfig {
            t0: 1e-12,
            seed: 3,
            termination: Termination::rounds(50),
            ..SaConfig::default()
        };
        let r = sa_solve(&inst, &cfg).unwrap();
        for w in r.trace.windows(2) {
            assert!(w[1].best_cost <= w[0].best_cost);
        }
        assert!(is_valid_tour(&inst, &r.tour).is_ok());
    }

    #[test]
    fn best_is_monotone_and_deterministic() {
        let inst = scatter(6);
        let cfg = SaConfig {
            seed: 4,
            termination: Termination::rounds(80),
            ..SaConfig::default()
        };
        let a = sa_solve(&inst, &cfg).unwrap();
        let b = sa_solve(&inst, &cfg).unwrap();
        assert_eq!(a.tour, b.tour);
        for w in a.trace.windows(2) {
            assert!(w[1].best_star_cost <= w[0].best_star_cost);
        }
    }

    #[test]
    fn rejects_bad_schedule() {
        let bad = SaConfig {
            cooling: 1.0,
            ..SaConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SaConfig {
            t0: 0.0,
            ..SaConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
