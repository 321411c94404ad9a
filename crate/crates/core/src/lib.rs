//! Generalized TSP solving with a discrete state transition search.
//!
//! An [`Instance`] holds `n` vertices split into `m` disjoint clusters. A
//! [`Tour`] visits every cluster exactly once through one chosen vertex.
//! [`solve`] runs the state transition search; [`sa_solve`] is a simulated
//! annealing baseline. Vertex and cluster indices are 0-based in the API and
//! 1-based in files, tour lines and reports.

pub mod bench;
pub mod cluster_opt;
pub mod dsta;
pub mod generate;
pub mod instance;
pub mod neighbor;
pub mod operators;
pub mod sa;
pub mod tour;

pub use bench::{brute_force_oracle, delta_avg, run_experiment, ExperimentConfig, RunReport};
pub use cluster_opt::{full_co, short_co};
pub use dsta::{solve, solve_with, RunResult, SolverConfig, SolverError, Termination};
pub use instance::{parse_gtsplib, Instance, InstanceError, ParseError, WeightKind};
pub use neighbor::NeighborModel;
pub use sa::{sa_solve, SaConfig};
pub use tour::{is_valid_tour, tour_cost, Tour, TourError};
