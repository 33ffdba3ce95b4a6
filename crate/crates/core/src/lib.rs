//! Three-phase feeder load balancing.
//!
//! Each of `N` single-phase load currents is connected to exactly one of the
//! three phases, `N/3` loads per phase, so that the phase currents come out as
//! equal as possible. The crate provides
//!
//! * the feeder model: phase sums, switch matrices, the radial current
//!   recursion and the branch loss formula ([`model`]);
//! * an exhaustive optimal solver and a greedy group-selection heuristic
//!   ([`balancing`]);
//! * a generalized regression network trained on solved instances
//!   ([`grnn`]);
//! * seeded experiments and recomputation of the reference tables
//!   ([`harness`]) and the text formats used by the CLI ([`io`]).
//!
//! Model and solver code is generic over [`Current`], implemented for `f64`,
//! `f32` and [`Rational64`]. The aliases below fix the scalar for common use.

pub mod balancing;
pub mod error;
pub mod grnn;
pub mod harness;
pub mod io;
pub mod model;
pub mod scalar;

pub use num_rational::Rational64;

pub use balancing::{exact_balance, greedy_balance, objective_value, BalanceObjective, EXACT_LIMIT};
pub use error::{BalanceError, Result};
pub use grnn::{
    classify_outcome, decode_outputs, default_spread, min_pairwise_distance, repair_assignment,
    GrnnModel, Outcome,
};
pub use harness::{
    generate_instances, reproduce_tables, run_experiment, ExperimentConfig, ExperimentSummary,
    LabelSource,
};
pub use model::{
    assignment_to_switch_matrix, feeder_phase_currents, ideal_current, pairwise_diffs, phase_sums,
    total_power_loss, validate_assignment, AssignmentVerdict, BalanceReport, Branch,
    ConnectionPoint, FeederChain, LoadSet, PhaseAssignment, SwitchMatrix, PHASES,
};
pub use scalar::Current;

pub type LoadSet64 = LoadSet<f64>;
pub type LoadSet32 = LoadSet<f32>;
pub type ExactLoadSet = LoadSet<Rational64>;

pub type BalanceReport64 = BalanceReport<f64>;
pub type ExactBalanceReport = BalanceReport<Rational64>;

pub type Branch64 = Branch<f64>;
pub type FeederChain64 = FeederChain<f64>;

pub type GrnnModel64 = GrnnModel<f64>;
pub type GrnnModel32 = GrnnModel<f32>;
