//! Cokernels of random matrices over `Z/p^kZ` as modules over
//! `R = (Z/p^kZ)[t]/(P)`: exact ring and linear algebra, module invariants,
//! limiting distributions, and Monte-Carlo verification.

pub mod factor;
pub mod linalg;
pub mod mc;
pub mod measure;
pub mod module;
pub mod ring;
pub mod scalar;

pub use scalar::Real;

/// Double-precision aliases of the generic float results.
pub type LimitResult = measure::LimitResult<f64>;
pub type AbelianLimit = measure::AbelianLimit<f64>;
pub type TruncatedProduct = measure::TruncatedProduct<f64>;
