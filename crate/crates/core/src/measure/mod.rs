//! Limiting distributions of random cokernels: infinite products with
//! certified truncation, and the per-module limiting probabilities.

mod limit;
mod product;

pub use limit::{
    abelian_limit, catalog_limits, limiting_probability, limiting_probability_squarefree,
    AbelianLimit, FactorTerm, LimitResult,
};
pub use product::{truncate_product, TruncatedProduct};

use thiserror::Error;

use crate::module::ModuleError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("product diverges: ratio c/q = {c}/{q} is at least 1")]
    DivergentRatio { c: String, q: String },
    #[error("invalid product parameters: {0}")]
    InvalidParameters(String),
    #[error("P mod p is not square-free")]
    NotSquarefree,
}
