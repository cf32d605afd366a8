//! Monte-Carlo experiments: ε-balanced matrix sampling, type tallies,
//! empirical moments, and exhaustive small-case oracles.
//!
//! Every sample `i` draws from its own ChaCha8 stream (`set_stream(i)`), so
//! results do not depend on how samples are distributed over threads.

mod exhaustive;
mod experiment;
mod measure;
mod moments;
mod stats;

pub use exhaustive::{exact_moment, exhaustive_distribution, ExactTally};
pub use experiment::{run_experiment, sample_rng, simulation_context, ExperimentConfig, Tally};
pub use measure::{sample_matrix, EntrySampler, MeasureKind, MeasureSpec};
pub use moments::{empirical_moment, MomentEstimate};
pub use stats::{tv_distance, wilson_interval, z_score};

use thiserror::Error;

use crate::measure::MeasureError;
use crate::module::ModuleError;

/// Identifier of the random number generator and stream layout.
pub const RNG_ID: &str = "rand_chacha-0.9/ChaCha8Rng seed_from_u64(seed ^ n*0x9E3779B97F4A7C15), stream = sample index";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("exhaustive enumeration too large: {0}")]
    TooLarge(String),
    #[error("worker pool: {0}")]
    Pool(String),
}
