use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use gtsp_dsta::bench::{self, BenchError, SolverKind};
use gtsp_dsta::dsta::write_trace_csv;
use gtsp_dsta::{Instance, NeighborModel, SolverConfig, Termination};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(name = "gtsp-dsta", version, about = "Symmetric GTSP solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the best tour.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        se: Option<usize>,
        #[arg(long)]
        ma: Option<usize>,
        #[arg(long)]
        mb: Option<usize>,
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p1: Option<f64>,
        #[arg(long)]
        p2: Option<f64>,
        #[arg(long)]
        max_rounds: Option<u64>,
        #[arg(long)]
        stall_rounds: Option<u64>,
        #[arg(long, value_name = "SECS")]
        time_limit: Option<f64>,
        /// Write the per-operator trace as CSV.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
    /// Seeded multi-run experiment over instance files or directories.
    Bench {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, value_enum, default_value_t = SolverChoice::Dsta)]
        solver: SolverChoice,
        /// Write PREFIX.csv and PREFIX.json.
        #[arg(long, value_name = "PREFIX")]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value_t = 1)]
        base_seed: u64,
    },
    /// Exhaustive optimum of a tiny instance.
    Oracle { file: PathBuf },
    /// Print the K-Neighbor table.
    Neighbors {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        k: usize,
        /// Write the relevancy matrix as CSV.
        #[arg(long, value_name = "FILE")]
        dump_p: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverChoice {
    Dsta,
    Sa,
    Both,
}

enum Failure {
    Usage(String),
    Parse(String),
    Guard(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_GUARD)
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    Instance::from_file(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            file,
            seed,
            se,
            ma,
            mb,
            mc,
            k,
            p1,
            p2,
            max_rounds,
            stall_rounds,
            time_limit,
            trace,
        } => {
            let inst = load(&file)?;
            let d = SolverConfig::default();
            let mut termination = d.termination;
            if max_rounds.is_some() || stall_rounds.is_some() || time_limit.is_some() {
                termination = Termination {
                    max_rounds,
                    stall_rounds,
                    time_limit: time_limit.map(Duration::from_secs_f64),
                };
            }
            let cfg = SolverConfig {
                se: se.unwrap_or(d.se),
                m_a: ma.unwrap_or(d.m_a),
                m_b: mb.unwrap_or(d.m_b),
                m_c: mc.unwrap_or(d.m_c),
                k: k.unwrap_or(d.k),
                p1: p1.unwrap_or(d.p1),
                p2: p2.unwrap_or(d.p2),
                seed,
                termination,
            };
            let result =
                gtsp_dsta::solve(&inst, &cfg).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(path) = trace {
                let f = File::create(&path)?;
                write_trace_csv(&result.trace, BufWriter::new(f))
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            println!("{}", result.tour.to_line());
            eprintln!(
                "{}: cost {} after {} rounds in {:.3}s",
                inst.name(),
                result.cost,
                result.rounds,
                result.elapsed.as_secs_f64()
            );
            Ok(())
        }
        Command::Bench {
            inputs,
            runs,
            solver,
            out,
            workers,
            base_seed,
        } => {
            let files = expand_inputs(&inputs)?;
            let solvers = match solver {
                SolverChoice::Dsta => vec![SolverKind::Dsta],
                SolverChoice::Sa => vec![SolverKind::Sa],
                SolverChoice::Both => vec![SolverKind::Dsta, SolverKind::Sa],
            };
            let cfg = bench::ExperimentConfig {
                solvers,
                runs,
                workers,
                base_seed,
                match_sa_time: matches!(solver, SolverChoice::Both),
                ..Default::default()
            };
            let exp = bench::run_experiment(&files, &cfg);
            bench::write_summary_csv(&exp.reports, io::stdout().lock())
                .map_err(|e| Failure::Usage(e.to_string()))?;
            for r in exp.reports.iter().filter(|r| r.below_opt) {
                eprintln!(
                    "warning: {} {} best {} is below the listed optimum {}",
                    r.instance,
                    r.solver.name(),
                    r.best,
                    r.opt.unwrap_or_default()
                );
            }
            if let Some(prefix) = out {
                bench::emit_report(&exp.reports, &prefix)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
            }
            if let Some((path, e)) = exp.failures.first() {
                for (p, e) in &exp.failures {
                    eprintln!("error: {}: {e}", p.display());
                }
                return Err(match e {
                    BenchError::Instance(_) => Failure::Parse(format!(
                        "{} of {} inputs failed, first {}",
                        exp.failures.len(),
                        files.len(),
                        path.display()
                    )),
                    other => Failure::Usage(other.to_string()),
                });
            }
            Ok(())
        }
        Command::Oracle { file } => {
            let inst = load(&file)?;
            match bench::brute_force_oracle(&inst) {
                Ok((cost, tour)) => {
                    println!("{cost}");
                    println!("{}", tour.to_line());
                    Ok(())
                }
                Err(e @ BenchError::Guard(_)) => Err(Failure::Guard(e.to_string())),
                Err(e) => Err(Failure::Usage(e.to_string())),
            }
        }
        Command::Neighbors { file, k, dump_p } => {
            if k == 0 {
                return Err(Failure::Usage("--k must be at least 1".into()));
            }
            let inst = load(&file)?;
            let nm = NeighborModel::build_or_uniform(&inst, k);
            let mut out = io::stdout().lock();
            for (c, row) in nm.table().iter().enumerate() {
                let list: Vec<String> = row.iter().map(|j| (j + 1).to_string()).collect();
                writeln!(out, "{}: {}", c + 1, list.join(" "))?;
            }
            if let Some(path) = dump_p {
                let f = File::create(&path)?;
                nm.write_relevancy_csv(BufWriter::new(f))
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
    }
}

/// Directories expand to their regular files, sorted by name.
fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(input)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}
