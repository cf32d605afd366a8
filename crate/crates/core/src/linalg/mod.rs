//! Dense matrices over `Z/p^kZ`: Smith form, Howell form, kernels and
//! solution counts.

mod howell;
mod matrix;
mod snf;
mod solve;

pub use howell::{howell_form, kernel_basis, span_log_size, HowellResult};
pub use matrix::{Matrix, MatrixJson};
pub use snf::{smith_normal_form, snf_valuations, SnfResult, SnfTransforms};
pub use solve::{count_solutions, count_solutions_snf};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows have different lengths")]
    Ragged,
    #[error("target exponent {e} exceeds the working precision k = {k}")]
    TargetExponent { e: u32, k: u32 },
}
