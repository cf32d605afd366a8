//! Counting `R`-linear maps `M -> G` from a presentation of `M` into a
//! module `G` in standard form.
//!
//! A map is a choice of images `g_i` of the generators with
//! `Σ_i c_i(T) g_i = 0` in `G` for every relation `Σ_i c_i e_i`. Working
//! with lifts `g_i ∈ (Z/p^k)^m`, each equation lives in `⊕ Z/p^(e_l)`, and
//! every map has exactly `|L|^n` lifts.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use super::{FiniteModule, ModuleError, ModulePresentation};
use crate::linalg::{count_solutions, howell_form, HowellResult, Matrix};

/// `c_i(T)` for every relation column `c` and generator `i`.
fn relation_operators(m: &ModulePresentation, g: &FiniteModule) -> Vec<Vec<Matrix>> {
    let md = *g.modulus();
    let d = m.spec().degree();
    let t = g.t_action();
    let mut pows = vec![Matrix::identity(md, g.rank())];
    for a in 1..d {
        let next = pows[a - 1].mul(t);
        pows.push(next);
    }
    let rel = m.relations();
    (0..rel.cols())
        .map(|c| {
            (0..m.ngens())
                .map(|i| {
                    let mut acc = Matrix::zeros(md, g.rank(), g.rank());
                    for (a, pa) in pows.iter().enumerate() {
                        let x = rel[(i * d + a, c)];
                        if x != 0 {
                            acc = acc.add(&pa.scale(x));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn check_rings(m: &ModulePresentation, g: &FiniteModule) -> Result<(), ModuleError> {
    if m.spec() != g.spec() {
        return Err(ModuleError::RingMismatch);
    }
    Ok(())
}

/// `log_p |Hom_R(M, G)|`.
pub fn count_hom(m: &ModulePresentation, g: &FiniteModule) -> Result<u64, ModuleError> {
    check_rings(m, g)?;
    let md = *g.modulus();
    let id = Matrix::identity(md, g.rank());
    hom_log(m, g, &id, g.log_size())
}

/// `log_p |Hom_R(M, H)|` for the submodule `H ≤ G` generated (as an abelian
/// group, together with `L`) by the rows of `basis`.
pub fn count_hom_into(
    m: &ModulePresentation,
    g: &FiniteModule,
    basis: &HowellResult,
) -> Result<u64, ModuleError> {
    check_rings(m, g)?;
    hom_log(m, g, &basis.form.transpose(), g.key_log_size(basis))
}

/// Unknowns `g_i = B y_i`; the map `y -> B y mod L` onto `H` has fibres of
/// size `p^(ks) / |H|`.
fn hom_log(
    m: &ModulePresentation,
    g: &FiniteModule,
    b: &Matrix,
    log_h: u64,
) -> Result<u64, ModuleError> {
    let n = m.ngens();
    let mg = g.rank();
    if mg == 0 || log_h == 0 {
        return Ok(0);
    }
    let md = *g.modulus();
    let k = md.k() as u64;
    let s = b.cols();
    let ops = relation_operators(m, g);
    let r = ops.len();
    let mut a = Matrix::zeros(md, r * mg, n * s);
    for (c, row_ops) in ops.iter().enumerate() {
        for (i, op) in row_ops.iter().enumerate() {
            if op.is_zero() {
                continue;
            }
            let block = op.mul(b);
            for x in 0..mg {
                for y in 0..s {
                    a[(c * mg + x, i * s + y)] = block[(x, y)];
                }
            }
        }
    }
    let targets: Vec<u32> = (0..r).flat_map(|_| g.exps().iter().copied()).collect();
    let lifted = count_solutions(&a, &targets)?;
    let fibre = n as u64 * (k * s as u64 - log_h);
    Ok(lifted - fibre)
}

/// All tuples of generator images, in mixed-radix order, filtered to those
/// that satisfy every relation. Guarded by `max_tuples`.
fn enumerate_homs(
    m: &ModulePresentation,
    g: &FiniteModule,
    max_tuples: u64,
) -> Result<Vec<Vec<Vec<u64>>>, ModuleError> {
    check_rings(m, g)?;
    let n = m.ngens() as u32;
    let size = g.modulus().p().checked_pow(g.log_size() as u32);
    let total = size.and_then(|s| s.checked_pow(n));
    let total = match total {
        Some(t) if t <= max_tuples => t,
        _ => {
            return Err(ModuleError::TooLargeForBruteForce(format!(
                "|G|^n exceeds {max_tuples}"
            )))
        }
    };
    let elements: Vec<Vec<u64>> = g.elements().collect();
    let ops = relation_operators(m, g);
    let md = *g.modulus();
    let q = elements.len() as u64;
    let mut out = Vec::new();
    for mut idx in 0..total {
        let tuple: Vec<Vec<u64>> = (0..n)
            .map(|_| {
                let e = elements[(idx % q) as usize].clone();
                idx /= q;
                e
            })
            .collect();
        let ok = ops.iter().all(|row_ops| {
            let mut acc = vec![0u64; g.rank()];
            for (op, gi) in row_ops.iter().zip(&tuple) {
                for (a, v) in acc.iter_mut().zip(op.mul_vec(gi)) {
                    *a = md.add(*a, v);
                }
            }
            g.is_zero_element(&acc)
        });
        if ok {
            out.push(tuple);
        }
    }
    Ok(out)
}

/// `|Hom_R(M, G)|` by enumerating all `|G|^n` candidate generator images.
pub fn count_hom_brute(m: &ModulePresentation, g: &FiniteModule) -> Result<u64, ModuleError> {
    Ok(enumerate_homs(m, g, 1 << 20)?.len() as u64)
}

/// `|Sur_R(M, G)|` by direct filtering of all homomorphisms; requires
/// `|G|^n <= max_tuples`.
pub fn count_sur_direct(
    m: &ModulePresentation,
    g: &FiniteModule,
    max_tuples: u64,
) -> Result<u64, ModuleError> {
    let full = g.log_size();
    Ok(enumerate_homs(m, g, max_tuples)?
        .into_iter()
        .filter(|tuple| g.key_log_size(&g.span_key(tuple)) == full)
        .count() as u64)
}

/// `|Sur_R(M, G)|` by Möbius inversion over the submodule lattice of `G`.
pub fn count_sur(m: &ModulePresentation, g: &FiniteModule) -> Result<BigUint, ModuleError> {
    SubmoduleLattice::new(g, 8, 4096)?.count_sur(m)
}

/// A submodule of `G`, keyed by the Howell form of its lifts.
#[derive(Clone, Debug)]
struct Submodule {
    key: HowellResult,
    log_size: u64,
}

/// All `R`-submodules of a small module, with Möbius values `μ(H, G)`.
#[derive(Clone, Debug)]
pub struct SubmoduleLattice {
    module: FiniteModule,
    subs: Vec<Submodule>,
    mobius: Vec<i64>,
}

impl SubmoduleLattice {
    /// Breadth-first closure of the cyclic submodules under sums. Fails with
    /// `CatalogTooLarge` when `log_p |G| > max_log_size` or more than
    /// `max_count` submodules appear.
    pub fn new(g: &FiniteModule, max_log_size: u64, max_count: usize) -> Result<Self, ModuleError> {
        if g.log_size() > max_log_size {
            return Err(ModuleError::CatalogTooLarge(format!(
                "|G| = p^{} exceeds p^{max_log_size}",
                g.log_size()
            )));
        }
        let mut index: HashMap<HowellResult, usize> = HashMap::new();
        let mut subs: Vec<Submodule> = Vec::new();
        let mut push = |key: HowellResult, subs: &mut Vec<Submodule>| -> Option<usize> {
            if index.contains_key(&key) {
                return None;
            }
            let log_size = g.key_log_size(&key);
            index.insert(key.clone(), subs.len());
            subs.push(Submodule { key, log_size });
            Some(subs.len() - 1)
        };
        push(g.span_key(&[]), &mut subs);
        let mut cyclic: Vec<HowellResult> = Vec::new();
        let mut seen_cyclic = std::collections::HashSet::new();
        for x in g.elements() {
            let key = g.span_key(&[x]);
            if seen_cyclic.insert(key.clone()) {
                cyclic.push(key);
            }
        }
        let mut head = 0;
        while head < subs.len() {
            let h = subs[head].key.form.clone();
            for c in &cyclic {
                let sum = howell_form(&h.vstack(&c.form));
                if push(sum, &mut subs).is_some() && subs.len() > max_count {
                    return Err(ModuleError::CatalogTooLarge(format!(
                        "more than {max_count} submodules"
                    )));
                }
            }
            head += 1;
        }
        // μ(G, G) = 1 and μ(H, G) = -Σ_{H < K ≤ G} μ(K, G), largest first.
        let mut order: Vec<usize> = (0..subs.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(subs[i].log_size));
        let mut mobius = vec![0i64; subs.len()];
        for (pos, &h) in order.iter().enumerate() {
            if pos == 0 {
                mobius[h] = 1;
                continue;
            }
            let mut acc = 0i64;
            for &kk in &order[..pos] {
                if subs[kk].log_size > subs[h].log_size && contains(&subs[kk].key, &subs[h].key) {
                    acc += mobius[kk];
                }
            }
            mobius[h] = -acc;
        }
        Ok(SubmoduleLattice {
            module: g.clone(),
            subs,
            mobius,
        })
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    /// `log_p |H|` for each submodule, in discovery order.
    pub fn sizes(&self) -> Vec<u64> {
        self.subs.iter().map(|s| s.log_size).collect()
    }

    /// `|Sur_R(M, G)| = Σ_H μ(H, G) |Hom_R(M, H)|`.
    pub fn count_sur(&self, m: &ModulePresentation) -> Result<BigUint, ModuleError> {
        let p = BigInt::from(self.module.modulus().p());
        let mut total = BigInt::zero();
        for (sub, &mu) in self.subs.iter().zip(&self.mobius) {
            if mu == 0 {
                continue;
            }
            let e = count_hom_into(m, &self.module, &sub.key)?;
            total += BigInt::from(mu) * p.pow(e as u32);
        }
        if total.is_negative() {
            return Err(ModuleError::Internal("negative surjection count".into()));
        }
        Ok(total.to_biguint().expect("nonnegative"))
    }
}

fn contains(big: &HowellResult, small: &HowellResult) -> bool {
    (0..small.form.rows()).all(|r| big.contains(small.form.row(r)))
}
