use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{truncate_product, MeasureError, TruncatedProduct};
use crate::module::{
    aut_count_partition, count_aut, ext1_size, hom_to_residue_field_size, partitions_up_to,
    FiniteModule, ModuleCatalog, ModuleType, Partition, RingContext,
};
use crate::scalar::Real;

/// Local data of one irreducible factor `P_j` (sizes as `log_p`).
#[derive(Clone, Debug, PartialEq)]
pub struct FactorTerm<T> {
    pub d: usize,
    pub q: u64,
    pub hom_log: u64,
    pub ext_log: u64,
    /// `∏_i (1 - |Ext¹| q^-i / |Hom|)`; `None` when it vanishes exactly.
    pub product: Option<TruncatedProduct<T>>,
}

/// `(1/|Aut_R(G)|) ∏_j ∏_{i>=1} (1 - |Ext¹(G, F_qj)| q_j^-i / |Hom(G, F_qj)|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitResult<T> {
    pub value: T,
    /// Half-width of a certified enclosure of the exact value.
    pub radius: T,
    pub aut: BigUint,
    pub terms: Vec<FactorTerm<T>>,
    /// Largest truncation index over the factors.
    pub truncation: u32,
    /// Sum of the per-factor tail bounds.
    pub tail: T,
    /// Whether some factor has `|Ext¹| > |Hom|`, making the value exactly 0.
    pub vanishing: bool,
}

fn big_to_real<T: Real>(x: &BigUint) -> T {
    T::lit(x.to_f64().unwrap_or(f64::INFINITY))
}

fn assemble<T: Real>(aut: BigUint, terms: Vec<FactorTerm<T>>) -> LimitResult<T> {
    let vanishing = terms.iter().any(|t| t.product.is_none());
    let truncation = terms
        .iter()
        .filter_map(|t| t.product.map(|p| p.terms))
        .max()
        .unwrap_or(0);
    if vanishing {
        return LimitResult {
            value: T::zero(),
            radius: T::zero(),
            aut,
            terms,
            truncation,
            tail: T::zero(),
            vanishing,
        };
    }
    let a = big_to_real::<T>(&aut);
    let mut value = T::one() / a;
    let mut tail = T::zero();
    let mut rel = T::epsilon();
    for t in &terms {
        let p = t.product.expect("checked above");
        value = value * p.value;
        tail = tail + p.tail;
        rel = rel + p.radius() / p.value;
    }
    LimitResult {
        value,
        radius: value * rel,
        aut,
        terms,
        truncation,
        tail,
        vanishing,
    }
}

fn factor_term<T: Real>(
    ctx: &RingContext,
    j: usize,
    hom_log: u64,
    ext_log: u64,
) -> Result<FactorTerm<T>, MeasureError> {
    let d = ctx.degree(j);
    let q = ctx.field_size(j);
    if ext_log < hom_log || (ext_log - hom_log) % d as u64 != 0 {
        return Err(crate::module::ModuleError::Internal(format!(
            "Ext/Hom ratio p^{} is not a power of q_{j} = {q}",
            ext_log as i64 - hom_log as i64
        ))
        .into());
    }
    // Factors are 1 - q^(u - i) with u = (ext - hom)/d; for u >= 1 the
    // factor i = u is zero.
    let product = if ext_log > hom_log {
        None
    } else {
        Some(truncate_product(T::one(), T::lit(q as f64))?)
    };
    Ok(FactorTerm {
        d,
        q,
        hom_log,
        ext_log,
        product,
    })
}

/// Limiting probability of `cok(P(X)) ≅ G` for any module `G`, with `k`
/// raised as needed so that `p^(k-1) G = 0`.
pub fn limiting_probability<T: Real>(
    ctx: &RingContext,
    g: &FiniteModule,
) -> Result<LimitResult<T>, MeasureError> {
    let need = ctx.k().max(g.exponent() + 1);
    let ctx = ctx.with_exponent(need).map_err(crate::module::ModuleError::from)?;
    let g = g.with_exponent(need)?;
    let aut = count_aut(&ctx, &g)?;
    let mut terms = Vec::with_capacity(ctx.len());
    for j in 0..ctx.len() {
        let hom = hom_to_residue_field_size(&ctx, &g, j)?;
        let ext = ext1_size(&ctx, &g, j)?;
        terms.push(factor_term(&ctx, j, hom, ext)?);
    }
    Ok(assemble(aut, terms))
}

/// Closed form for square-free `P mod p` and `G` given by partitions:
/// `(1/∏_j |Aut(H_λ^(j))|) ∏_j ∏_i (1 - q_j^-i)`.
pub fn limiting_probability_squarefree<T: Real>(
    ctx: &RingContext,
    parts: &[Partition],
) -> Result<LimitResult<T>, MeasureError> {
    if !ctx.is_squarefree() {
        return Err(MeasureError::NotSquarefree);
    }
    if parts.len() != ctx.len() {
        return Err(MeasureError::InvalidParameters(format!(
            "expected {} partitions",
            ctx.len()
        )));
    }
    let mut aut = BigUint::from(1u32);
    let mut terms = Vec::with_capacity(ctx.len());
    for (j, lambda) in parts.iter().enumerate() {
        aut *= aut_count_partition(lambda, ctx.field_size(j));
        let s = (ctx.degree(j) * lambda.len()) as u64;
        terms.push(factor_term(ctx, j, s, s)?);
    }
    Ok(assemble(aut, terms))
}

/// Limits for every catalog entry, in catalog order.
pub fn catalog_limits<T: Real>(
    ctx: &RingContext,
    catalog: &ModuleCatalog,
) -> Result<Vec<LimitResult<T>>, MeasureError> {
    catalog
        .entries()
        .iter()
        .map(|e| match &e.module_type {
            ModuleType::Partitions(parts) => limiting_probability_squarefree(ctx, parts),
            _ => limiting_probability(ctx, &e.module),
        })
        .collect()
}

/// Limiting probability that `cok(P(X))` has a given abelian type: the sum
/// over all tuples `(λ^(1), …, λ^(l))` with `⊕_j H_λ^(j)^(d_j) ≅ G` of the
/// tuple's own limiting probability.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianLimit<T> {
    pub value: T,
    pub radius: T,
    pub tuples: Vec<(Vec<Partition>, LimitResult<T>)>,
}

pub fn abelian_limit<T: Real>(
    ctx: &RingContext,
    abelian: &[u32],
) -> Result<AbelianLimit<T>, MeasureError> {
    if !ctx.is_squarefree() {
        return Err(MeasureError::NotSquarefree);
    }
    let mut target: Vec<u32> = abelian.iter().copied().filter(|&e| e > 0).collect();
    target.sort_unstable_by(|a, b| b.cmp(a));
    let weight: u64 = target.iter().map(|&e| e as u64).sum();
    let top = target.first().copied().unwrap_or(0);
    let mut tuples: Vec<Vec<Partition>> = vec![Vec::new()];
    for j in 0..ctx.len() {
        let d = ctx.degree(j) as u64;
        let options = partitions_up_to(weight / d, top);
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                options.iter().map(move |lambda| {
                    let mut t = t.clone();
                    t.push(lambda.clone());
                    t
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    let mut value = T::zero();
    let mut radius = T::zero();
    for t in tuples {
        let mut parts: Vec<u32> = Vec::new();
        for (j, lambda) in t.iter().enumerate() {
            for &x in lambda {
                parts.extend(std::iter::repeat_n(x, ctx.degree(j)));
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        if parts != target {
            continue;
        }
        let r = limiting_probability_squarefree::<T>(ctx, &t)?;
        value = value + r.value;
        radius = radius + r.radius;
        out.push((t, r));
    }
    Ok(AbelianLimit {
        value,
        radius,
        tuples: out,
    })
}
