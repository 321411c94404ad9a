//! Discrete state transition search.
//!
//! One round runs the five transformation operators in a fixed order
//! (swap, shift, k-circle, k-symmetry, k-shift). Each operator draws `se`
//! candidates from the incumbent, polishes every candidate with short CO and
//! keeps the cheapest. The incumbent then follows the two-probability update:
//! a better candidate is always taken, a worse one with probability `p1`
//! (risk), and after the historical best is refreshed the incumbent is reset
//! to it with probability `p2` (restore).

use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cluster_opt::{full_co, short_co_in_place};
use crate::instance::Instance;
use crate::neighbor::NeighborModel;
use crate::operators::{
    apply_move, sample_circle, sample_k_circle, sample_k_shift, sample_k_symmetry, sample_shift,
    sample_swap, sample_symmetry, Candidate,
};
use crate::tour::Tour;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("no termination criterion is active")]
    NoTermination,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

/// Stop conditions, checked after every full round. Any active one stops the
/// run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Termination {
    pub max_rounds: Option<u64>,
    /// Rounds without an improvement of the historical best.
    pub stall_rounds: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Termination {
    pub fn rounds(n: u64) -> Self {
        Termination {
            max_rounds: Some(n),
            stall_rounds: None,
            time_limit: None,
        }
    }

    pub fn stall(n: u64) -> Self {
        Termination {
            max_rounds: None,
            stall_rounds: Some(n),
            time_limit: None,
        }
    }

    pub fn time(limit: Duration) -> Self {
        Termination {
            max_rounds: None,
            stall_rounds: None,
            time_limit: Some(limit),
        }
    }

    pub fn is_active(&self) -> bool {
        self.max_rounds.is_some() || self.stall_rounds.is_some() || self.time_limit.is_some()
    }

    pub(crate) fn reached(&self, rounds: u64, since_improvement: u64, elapsed: Duration) -> bool {
        self.max_rounds.is_some_and(|n| rounds >= n)
            || self.stall_rounds.is_some_and(|n| since_improvement >= n)
            || self.time_limit.is_some_and(|t| elapsed >= t)
    }
}

impl Default for Termination {
    fn default() -> Self {
        Termination {
            max_rounds: None,
            stall_rounds: Some(2000),
            time_limit: Some(Duration::from_secs(120)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Search enforcement: candidates drawn per operator call.
    pub se: usize,
    /// Most positions a swap exchanges.
    pub m_a: usize,
    /// Longest segment a shift moves.
    pub m_b: usize,
    /// Longest half-window a symmetry mirrors.
    pub m_c: usize,
    /// K-Neighbor list length.
    pub k: usize,
    /// Probability of accepting a worse candidate.
    pub p1: f64,
    /// Probability of resetting the incumbent to the historical best.
    pub p2: f64,
    pub seed: u64,
    pub termination: Termination,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            se: 50,
            m_a: 2,
            m_b: 1,
            m_c: 2,
            k: 8,
            p1: 0.1,
            p2: 0.05,
            seed: 0,
            termination: Termination::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |s: &str| Err(SolverError::InvalidConfig(s.to_string()));
        if self.se == 0 {
            return bad("se must be at least 1");
        }
        if self.m_a < 2 {
            return bad("m_a must be at least 2");
        }
        if self.m_b == 0 || self.m_c == 0 || self.k == 0 {
            return bad("m_b, m_c and k must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.p1) || !(0.0..=1.0).contains(&self.p2) {
            return bad("p1 and p2 must lie in [0, 1]");
        }
        if !self.termination.is_active() {
            return Err(SolverError::NoTermination);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Operator {
    Swap,
    Shift,
    KCircle,
    KSymmetry,
    KShift,
}

impl Operator {
    /// Order in which one round applies the operators.
    pub const ROUND: [Operator; 5] = [
        Operator::Swap,
        Operator::Shift,
        Operator::KCircle,
        Operator::KSymmetry,
        Operator::KShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Swap => "swap",
            Operator::Shift => "shift",
            Operator::KCircle => "k-circle",
            Operator::KSymmetry => "k-symmetry",
            Operator::KShift => "k-shift",
        }
    }

    /// Whether the operator can produce a move on a tour of `m` clusters.
    pub fn applicable(self, m: usize, cfg: &SolverConfig) -> bool {
        match self {
            Operator::Swap => m >= 2,
            Operator::Shift | Operator::KShift => m >= 3,
            Operator::KCircle => m >= 4,
            Operator::KSymmetry => m > 2 * cfg.m_c,
        }
    }
}

/// One line of the search trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub round: u64,
    pub operator: &'static str,
    pub best_cost: i64,
    pub best_star_cost: i64,
    pub elapsed_ms: f64,
}

/// Writes trace rows as CSV.
pub fn write_trace_csv<W: Write>(rows: &[TraceRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "round",
            "operator",
            "best_cost",
            "best_star_cost",
            "elapsed_ms",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub tour: Tour,
    pub cost: i64,
    pub rounds: u64,
    pub elapsed: Duration,
    pub trace: Vec<TraceRow>,
}

/// Search state: the incumbent, the historical best and the trace so far.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub best: Tour,
    pub best_star: Tour,
    pub round: u64,
    pub trace: Vec<TraceRow>,
}

impl SolverState {
    pub fn new(start: Tour) -> Self {
        SolverState {
            best_star: start.clone(),
            best: start,
            round: 0,
            trace: Vec::new(),
        }
    }
}

/// Passed to observers after every operator call.
pub struct RoundEvent<'a> {
    pub round: u64,
    pub operator: Operator,
    pub best: &'a Tour,
    pub best_star: &'a Tour,
}

/// Independent rng stream `stream` of the run seeded with `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream used by operator slot `op` of round `round` (rounds count from 1;
/// stream 0 is the initial tour).
pub fn round_stream(round: u64, op: usize) -> u64 {
    (round << 3) | op as u64
}

/// Uniformly random order and vertex choice, then full CO.
pub fn initial_tour<R: Rng + ?Sized>(inst: &Instance, rng: &mut R) -> Tour {
    let mut order: Vec<usize> = (0..inst.m()).collect();
    order.shuffle(rng);
    let choice: Vec<usize> = order
        .iter()
        .map(|&c| {
            let members = inst.cluster_members_idx(c);
            members[rng.random_range(0..members.len())]
        })
        .collect();
    let t = Tour::new(inst, order, choice).expect("random tour is valid by construction");
    full_co(inst, &t)
}

/// Draws one polished candidate for `op` from `from`.
fn candidate<R: Rng + ?Sized>(
    inst: &Instance,
    nm: &NeighborModel,
    from: &Tour,
    op: Operator,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Candidate {
    let m = from.len();
    let mv = match op {
        Operator::Swap => sample_swap(m, cfg.m_a, rng),
        Operator::Shift => sample_shift(m, cfg.m_b, rng),
        Operator::KCircle => {
            sample_k_circle(from, nm, rng).unwrap_or_else(|| sample_circle(m, rng))
        }
        Operator::KSymmetry => sample_k_symmetry(from, nm, cfg.m_c, rng)
            .unwrap_or_else(|| sample_symmetry(m, cfg.m_c, rng)),
        Operator::KShift => {
            sample_k_shift(from, nm, cfg.m_b, rng).unwrap_or_else(|| sample_shift(m, cfg.m_b, rng))
        }
    };
    let mut c = apply_move(inst, from, &mv);
    short_co_in_place(inst, &mut c.tour, &c.changed);
    c
}

/// Runs one operator call with `se` candidates and applies the two-probability
/// update to `state`. Returns true when the historical best improved.
pub fn operator_round<R: Rng + ?Sized>(
    state: &mut SolverState,
    inst: &Instance,
    nm: &NeighborModel,
    op: Operator,
    cfg: &SolverConfig,
    rng: &mut R,
) -> bool {
    let mut pick: Option<Tour> = None;
    for _ in 0..cfg.se {
        let c = candidate(inst, nm, &state.best, op, cfg, rng);
        if pick.as_ref().is_none_or(|p| c.tour.cost() < p.cost()) {
            pick = Some(c.tour);
        }
    }
    let cand = pick.expect("se >= 1");
    // a worse candidate only gets the p1 draw
    if cand.cost() < state.best.cost() || rng.random_bool(cfg.p1) {
        state.best = cand;
    }
    let improved = state.best.cost() < state.best_star.cost();
    if improved {
        state.best_star = state.best.clone();
    }
    if rng.random_bool(cfg.p2) {
        state.best = state.best_star.clone();
    }
    improved
}

/// Solves with a freshly built neighbor model.
pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    let nm = NeighborModel::build_or_uniform(inst, cfg.k);
    solve_with(inst, &nm, cfg, |_| {})
}

/// Solves with a prepared neighbor model, reporting every operator call to
/// `observe`.
pub fn solve_with<F>(
    inst: &Instance,
    nm: &NeighborModel,
    cfg: &SolverConfig,
    mut observe: F,
) -> Result<RunResult, SolverError>
where
    F: FnMut(&RoundEvent<'_>),
{
    cfg.validate()?;
    let started = Instant::now();
    let mut rng = substream(cfg.seed, 0);
    let mut state = SolverState::new(initial_tour(inst, &mut rng));
    let m = inst.m();
    let ops: Vec<(usize, Operator)> = Operator::ROUND
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, op)| op.applicable(m, cfg))
        .collect();
    let mut last_improvement = 0;
    loop {
        state.round += 1;
        for &(slot, op) in &ops {
            let mut rng = substream(cfg.seed, round_stream(state.round, slot));
            if operator_round(&mut state, inst, nm, op, cfg, &mut rng) {
                last_improvement = state.round;
            }
            state.trace.push(TraceRow {
                round: state.round,
                operator: op.name(),
                best_cost: state.best.cost(),
                best_star_cost: state.best_star.cost(),
                elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            });
            observe(&RoundEvent {
                round: state.round,
                operator: op,
                best: &state.best,
                best_star: &state.best_star,
            });
        }
        let stalled = state.round - last_improvement;
        if ops.is_empty()
            || cfg
                .termination
                .reached(state.round, stalled, started.elapsed())
        {
            break;
        }
    }
    Ok(RunResult {
        cost: state.best_star.cost(),
        tour: state.best_star,
        rounds: state.round,
        elapsed: started.elapsed(),
        trace: state.trace,
    })
}
