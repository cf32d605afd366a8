//! Exact arithmetic in `Z/p^kZ`, its polynomial ring, the quotient
//! `R = (Z/p^kZ)[t]/(P)` and the residue fields `F_p[t]/(P_j)`.

mod fq;
mod modulus;
mod poly;
mod quotient;

pub use fq::{FiniteField, FqElement};
pub use modulus::{is_prime, Modulus, Residue};
pub use poly::{Degree, Poly, PolyText};
pub use quotient::{RElement, RingSpec};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent k must be at least 1")]
    ZeroExponent,
    #[error("p^k = {p}^{k} does not fit below 2^63")]
    ModulusTooLarge { p: u64, k: u32 },
    #[error("polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("element is not a unit")]
    NonUnit,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("cannot parse polynomial {0:?}: expected comma-separated integers")]
    PolyParse(String),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("modulus {0} is not irreducible over F_p")]
    NotIrreducible(Poly),
}
