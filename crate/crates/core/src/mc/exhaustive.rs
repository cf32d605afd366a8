use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiment::build_pool;
use super::moments::{moment_setup, sur_count};
use super::McError;
use crate::linalg::Matrix;
use crate::module::{
    cokernel_r_generators, count_sur_direct, module_type, FiniteModule, ModuleCatalog,
    RingContext,
};
use crate::ring::Modulus;

/// Largest number of matrices the oracles will enumerate.
const MAX_MATRICES: u64 = 1 << 24;

/// Exact distribution of cokernel types over all `p^(k n²)` matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTally {
    pub n: usize,
    pub k: u32,
    /// Number of matrices, `p^(k n²)`.
    pub total: u64,
    pub ids: Vec<String>,
    pub counts: Vec<u64>,
    pub other: u64,
}

impl ExactTally {
    pub fn probability(&self, id: &str) -> Option<BigRational> {
        let i = self.ids.iter().position(|x| x == id)?;
        Some(BigRational::new(
            BigInt::from(self.counts[i]),
            BigInt::from(self.total),
        ))
    }
}

fn matrix_count(md: Modulus, n: usize) -> Result<u64, McError> {
    md.order()
        .checked_pow((n * n) as u32)
        .filter(|&t| t <= MAX_MATRICES)
        .ok_or_else(|| {
            McError::TooLarge(format!(
                "p^(k n^2) = {}^{} exceeds 2^24",
                md.order(),
                n * n
            ))
        })
}

fn matrix_at(md: Modulus, n: usize, mut idx: u64) -> Matrix {
    let q = md.order();
    let data = (0..n * n)
        .map(|_| {
            let x = idx % q;
            idx /= q;
            x
        })
        .collect();
    Matrix::from_vec(md, n, n, data).expect("n*n entries")
}

/// Types every matrix over `Z/p^k` at precision `k` (no raising; the
/// result is the exact finite-level distribution).
pub fn exhaustive_distribution(
    ctx: &RingContext,
    catalog: &ModuleCatalog,
    n: usize,
    threads: Option<usize>,
) -> Result<ExactTally, McError> {
    let md = *ctx.spec().modulus();
    let total = matrix_count(md, n)?;
    let cat = (!ctx.is_squarefree()).then_some(catalog);
    let len = catalog.len();
    let pool = build_pool(threads)?;
    let (counts, other) = pool.install(|| {
        (0..total)
            .into_par_iter()
            .try_fold(
                || (vec![0u64; len], 0u64),
                |(mut counts, mut other), idx| {
                    let x = matrix_at(md, n, idx);
                    let out = module_type(&x, ctx, cat)?;
                    match catalog.position(&out.module_type) {
                        Some(i) => counts[i] += 1,
                        None => other += 1,
                    }
                    Ok::<_, McError>((counts, other))
                },
            )
            .try_reduce(
                || (vec![0u64; len], 0u64),
                |(mut a, oa), (b, ob)| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    Ok((a, oa + ob))
                },
            )
    })?;
    Ok(ExactTally {
        n,
        k: ctx.k(),
        total,
        ids: catalog.entries().iter().map(|e| e.id.clone()).collect(),
        counts,
        other,
    })
}

/// Exact `E|Sur_R(cok(P(X)), G)|` over all matrices at precision
/// `max(k, e)`: by Möbius inversion over the submodules of `G`, and (when
/// `|G|^n <= 2^16`) independently by filtering all generator images.
pub fn exact_moment(
    ctx: &RingContext,
    g: &FiniteModule,
    n: usize,
    threads: Option<usize>,
) -> Result<(BigRational, Option<BigRational>), McError> {
    let (work, g, lattice) = moment_setup(ctx, g)?;
    let md = *work.spec().modulus();
    let total = matrix_count(md, n)?;
    let direct = g
        .modulus()
        .p()
        .checked_pow((g.log_size() * n as u64) as u32)
        .is_some_and(|t| t <= 1 << 16);
    let pool = build_pool(threads)?;
    let (mobius, filtered) = pool.install(|| {
        (0..total)
            .into_par_iter()
            .try_fold(
                || (0u128, 0u128),
                |(a, b), idx| {
                    let x = matrix_at(md, n, idx);
                    let m = sur_count(&lattice, &work, &x)?;
                    let d = if direct {
                        let pres = cokernel_r_generators(&x, work.spec());
                        u128::from(count_sur_direct(&pres, &g, 1 << 16)?)
                    } else {
                        0
                    };
                    Ok::<_, McError>((a + m, b + d))
                },
            )
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
    })?;
    let frac = |s: u128| BigRational::new(BigInt::from(s), BigInt::from(total));
    Ok((frac(mobius), direct.then(|| frac(filtered))))
}
