//! Multi-seed experiments, run statistics and the exhaustive oracle.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cluster_opt::full_co;
use crate::dsta::{solve_with, SolverConfig, SolverError, Termination};
use crate::instance::{Instance, InstanceError};
use crate::neighbor::NeighborModel;
use crate::sa::{sa_solve, SaConfig};
use crate::tour::Tour;

/// Largest cluster count [`brute_force_oracle`] accepts.
pub const ORACLE_MAX_CLUSTERS: usize = 8;
/// Largest product of cluster sizes [`brute_force_oracle`] accepts.
pub const ORACLE_MAX_ASSIGNMENTS: u64 = 100_000;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("optimum must be positive, got {0}")]
    NonPositiveOpt(i64),
    #[error("no run values")]
    NoValues,
    #[error("instance too large for exhaustive search: {0}")]
    Guard(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// Percent relative error of the mean run cost against `opt`.
pub fn delta_avg(values: &[i64], opt: i64) -> Result<f64, BenchError> {
    if opt <= 0 {
        return Err(BenchError::NonPositiveOpt(opt));
    }
    if values.is_empty() {
        return Err(BenchError::NoValues);
    }
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / values.len() as f64;
    Ok((mean - opt as f64) / opt as f64 * 100.0)
}

/// One row of the bundled best-known table.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct KnownOptimum {
    pub instance: String,
    pub opt: i64,
    pub ref_dsta_best: i64,
    pub ref_dsta_delta_avg: f64,
    pub ref_sa_best: i64,
    pub ref_sa_delta_avg: f64,
    pub flag: Option<String>,
    pub provenance: String,
}

const OPTIMA_CSV: &str = include_str!("../data/gtsplib_optima.csv");

pub fn known_optima() -> &'static [KnownOptimum] {
    static TABLE: OnceLock<Vec<KnownOptimum>> = OnceLock::new();
    TABLE.get_or_init(|| {
        csv::Reader::from_reader(OPTIMA_CSV.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .expect("bundled optima table is well formed")
    })
}

pub fn known_optimum(name: &str) -> Option<&'static KnownOptimum> {
    known_optima().iter().find(|k| k.instance == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Dsta,
    Sa,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Dsta => "dsta",
            SolverKind::Sa => "sa",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub cost: i64,
    pub time_s: f64,
    pub rounds: u64,
    pub tour: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub solver: SolverKind,
    pub opt: Option<i64>,
    pub best: i64,
    pub delta_avg: Option<f64>,
    pub t_avg: f64,
    /// Parse and neighbor-model time, kept out of `t_avg`.
    pub setup_s: f64,
    /// Set when `best` beats the bundled optimum; never clamped.
    pub below_opt: bool,
    pub runs: Vec<RunRecord>,
}

impl RunReport {
    fn from_records(
        instance: &str,
        solver: SolverKind,
        opt: Option<i64>,
        setup: Duration,
        runs: Vec<RunRecord>,
    ) -> Self {
        let costs: Vec<i64> = runs.iter().map(|r| r.cost).collect();
        let best = costs.iter().copied().min().unwrap_or(0);
        let t_avg = if runs.is_empty() {
            0.0
        } else {
            runs.iter().map(|r| r.time_s).sum::<f64>() / runs.len() as f64
        };
        RunReport {
            instance: instance.to_string(),
            solver,
            opt,
            best,
            delta_avg: opt.and_then(|o| delta_avg(&costs, o).ok()),
            t_avg,
            setup_s: setup.as_secs_f64(),
            below_opt: opt.is_some_and(|o| !runs.is_empty() && best < o),
            runs,
        }
    }

    /// Same report with timing fields zeroed, for determinism checks.
    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        r.t_avg = 0.0;
        r.setup_s = 0.0;
        for run in &mut r.runs {
            run.time_s = 0.0;
        }
        r
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dsta: SolverConfig,
    pub sa: SaConfig,
    pub solvers: Vec<SolverKind>,
    pub runs: usize,
    /// Run `i` uses seed `base_seed + i`.
    pub base_seed: u64,
    /// Concurrent runs; 0 lets the thread pool decide.
    pub workers: usize,
    /// Give SA a pure wall-clock budget equal to the DSTA mean run time on
    /// the same instance (needs DSTA listed before SA).
    pub match_sa_time: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dsta: SolverConfig::default(),
            sa: SaConfig::default(),
            solvers: vec![SolverKind::Dsta],
            runs: 10,
            base_seed: 1,
            workers: 0,
            match_sa_time: false,
        }
    }
}

/// Runs every configured solver `runs` times on one loaded instance.
pub fn run_instance(
    inst: &Instance,
    cfg: &ExperimentConfig,
    setup: Duration,
) -> Result<Vec<RunReport>, BenchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .expect("thread pool");
    let name = inst.name().to_string();
    let opt = known_optimum(&name).map(|k| k.opt);
    let model_started = Instant::now();
    let nm = NeighborModel::build_or_uniform(inst, cfg.dsta.k);
    let setup = setup + model_started.elapsed();

    let mut reports = Vec::new();
    let mut dsta_mean: Option<f64> = None;
    for &kind in &cfg.solvers {
        let records: Vec<Result<RunRecord, SolverError>> = pool.install(|| {
            (0..cfg.runs)
                .into_par_iter()
                .map(|i| {
                    let seed = cfg.base_seed + i as u64;
                    let result = match kind {
                        SolverKind::Dsta => {
                            let c = SolverConfig {
                                seed,
                                ..cfg.dsta.clone()
                            };
                            solve_with(inst, &nm, &c, |_| {})?
                        }
                        SolverKind::Sa => {
                            let mut c = SaConfig {
                                seed,
                                ..cfg.sa.clone()
                            };
                            if let (true, Some(t)) = (cfg.match_sa_time, dsta_mean) {
                                c.termination = Termination::time(Duration::from_secs_f64(t));
                            }
                            sa_solve(inst, &c)?
                        }
                    };
                    Ok(RunRecord {
                        seed,
                        cost: result.cost,
                        time_s: result.elapsed.as_secs_f64(),
                        rounds: result.rounds,
                        tour: result.tour.to_line(),
                    })
                })
                .collect()
        });
        let records = records.into_iter().collect::<Result<Vec<_>, _>>()?;
        let report = RunReport::from_records(&name, kind, opt, setup, records);
        if kind == SolverKind::Dsta {
            dsta_mean = Some(report.t_avg);
        }
        reports.push(report);
    }
    Ok(reports)
}

/// Outcome of [`run_experiment`]: reports for every file that loaded, and
/// the failures for those that did not.
#[derive(Debug, Default)]
pub struct Experiment {
    pub reports: Vec<RunReport>,
    pub failures: Vec<(PathBuf, BenchError)>,
}

/// Loads and runs every file; a failing file does not stop the others.
pub fn run_experiment<P: AsRef<Path>>(files: &[P], cfg: &ExperimentConfig) -> Experiment {
    let mut out = Experiment::default();
    for path in files {
        let path = path.as_ref();
        let started = Instant::now();
        let inst = match Instance::from_file(path) {
            Ok(inst) => inst,
            Err(e) => {
                out.failures.push((path.to_path_buf(), e.into()));
                continue;
            }
        };
        match run_instance(&inst, cfg, started.elapsed()) {
            Ok(r) => out.reports.extend(r),
            Err(e) => out.failures.push((path.to_path_buf(), e)),
        }
    }
    out
}

/// Exact optimum by enumerating every distinct cyclic cluster order (first
/// cluster fixed, mirror images skipped) and solving vertex choice for each
/// with full CO.
pub fn brute_force_oracle(inst: &Instance) -> Result<(i64, Tour), BenchError> {
    let m = inst.m();
    if m > ORACLE_MAX_CLUSTERS {
        return Err(BenchError::Guard(format!(
            "{m} clusters (limit {ORACLE_MAX_CLUSTERS})"
        )));
    }
    let product = inst
        .clusters()
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .unwrap_or(u64::MAX);
    if product > ORACLE_MAX_ASSIGNMENTS {
        return Err(BenchError::Guard(format!(
            "{product} vertex assignments (limit {ORACLE_MAX_ASSIGNMENTS})"
        )));
    }
    let mut rest: Vec<usize> = (1..m).collect();
    let mut best: Option<Tour> = None;
    permutations(&mut rest, 0, &mut |perm| {
        if perm.len() >= 2 && perm[0] > perm[perm.len() - 1] {
            return;
        }
        let mut order = Vec::with_capacity(m);
        order.push(0);
        order.extend_from_slice(perm);
        let t = Tour::with_first_vertices(inst, order).expect("permutation");
        let t = full_co(inst, &t);
        if best.as_ref().is_none_or(|b| t.cost() < b.cost()) {
            best = Some(t);
        }
    });
    let best = best.expect("at least one order");
    Ok((best.cost(), best))
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Summary CSV: one row per instance and solver.
pub fn write_summary_csv<W: Write>(reports: &[RunReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["instance", "solver", "opt", "best", "delta_avg", "t_avg"])?;
    for r in reports {
        w.write_record([
            r.instance.clone(),
            r.solver.name().to_string(),
            r.opt.map(|o| o.to_string()).unwrap_or_default(),
            r.best.to_string(),
            r.delta_avg.map(|d| format!("{d:.2}")).unwrap_or_default(),
            format!("{:.3}", r.t_avg),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `<prefix>.csv` (summary) and `<prefix>.json` (every run).
pub fn emit_report(reports: &[RunReport], prefix: &Path) -> Result<(PathBuf, PathBuf), BenchError> {
    let csv_path = prefix.with_extension("csv");
    let json_path = prefix.with_extension("json");
    let io_err = |path: &Path, source: io::Error| BenchError::Io {
        path: path.display().to_string(),
        source,
    };
    let f = File::create(&csv_path).map_err(|e| io_err(&csv_path, e))?;
    write_summary_csv(reports, BufWriter::new(f)).map_err(|e| io_err(&csv_path, e.into()))?;
    let f = File::create(&json_path).map_err(|e| io_err(&json_path, e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, reports).map_err(|e| io_err(&json_path, e.into()))?;
    w.flush().map_err(|e| io_err(&json_path, e))?;
    Ok((csv_path, json_path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::WeightKind;

    #[test]
    fn delta_avg_examples() {
        assert_eq!(delta_avg(&[100, 100], 100).unwrap(), 0.0);
        assert_eq!(delta_avg(&[100, 110], 100).unwrap(), 5.0);
        assert_eq!(delta_avg(&[11018; 10], 11018).unwrap(), 0.0);
        assert!(matches!(
            delta_avg(&[1], 0),
            Err(BenchError::NonPositiveOpt(0))
        ));
        assert!(matches!(delta_avg(&[], 5), Err(BenchError::NoValues)));
    }

    #[test]
    fn optima_table_loads() {
        let t = known_optima();
        assert_eq!(t.len(), 19);
        assert_eq!(known_optimum("30kroA150").unwrap().opt, 11018);
        assert_eq!(known_optimum("46pr226").unwrap().ref_dsta_best, 64007);
        let flagged = known_optimum("53pr264").unwrap();
        assert!(flagged.flag.is_some());
        assert!(flagged.ref_dsta_best < flagged.opt);
    }

    #[test]
    fn oracle_guard() {
        let n = 9;
        let inst = Instance::from_coords(
            "nine",
            WeightKind::Euc2d,
            (0..n).map(|i| (i as f64, 0.0)).collect(),
            (0..n).map(|i| vec![i]).collect(),
        )
        .unwrap();
        assert!(matches!(
            brute_force_oracle(&inst),
            Err(BenchError::Guard(_))
        ));
    }

    #[test]
    fn oracle_on_triangle() {
        let inst = Instance::from_coords(
            "tri",
            WeightKind::Euc2d,
            vec![(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)],
            vec![vec![0], vec![1], vec![2]],
        )
        .unwrap();
        assert_eq!(brute_force_oracle(&inst).unwrap().0, 12);
    }

    #[test]
    fn empty_summary_is_header_only() {
        let mut buf = Vec::new();
        write_summary_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "instance,solver,opt,best,delta_avg,t_avg\n"
        );
    }
}
