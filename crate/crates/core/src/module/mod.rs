//! Finite modules over `R = (Z/p^kZ)[t]/(P)`: presentations, the CRT
//! decomposition, and exact counts of Hom, Sur, Aut and Ext¹.

mod aut;
mod context;
mod ext;
mod finite;
mod hom;
mod presentation;
mod types;

pub use aut::{aut_count_partition, count_aut, count_aut_brute};
pub use context::RingContext;
pub use ext::{
    crt_component, ext1_size, ext1_size_strict, hom_to_residue_field_size, minimal_generators,
};
pub use finite::{FiniteModule, ModuleJson};
pub use hom::{
    count_hom, count_hom_brute, count_hom_into, count_sur, count_sur_direct, SubmoduleLattice,
};
pub(crate) use presentation::cokernel_r_generators;
pub use presentation::{present_cokernel, ModulePresentation};
pub use types::{
    enumerate_catalog, module_from_partitions, module_type, module_type_of, partitions_up_to,
    CatalogEntry, ModuleCatalog, ModuleType, Partition, TypeOutcome,
};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::ring::RingError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("module data invalid: {0}")]
    Invalid(String),
    #[error("P(T) does not vanish on the module")]
    NotAnnihilated,
    #[error("modules are defined over different rings")]
    RingMismatch,
    #[error("P mod p is not square-free; supply explicit module presentations")]
    NotSquarefree,
    #[error("submodule enumeration exceeds the bound ({0})")]
    CatalogTooLarge(String),
    #[error("too large for brute-force enumeration ({0})")]
    TooLargeForBruteForce(String),
    #[error("precision k = {k} does not satisfy p^(k-1) G = 0 (exponent {e})")]
    KViolation { k: u32, e: u32 },
    #[error("factor index {0} out of range")]
    NoSuchFactor(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
