//! The CRT decomposition `G ≅ G_1 × … × G_l` and the local invariants of
//! each component: minimal generators, `Hom(G_j, F_q)` and `Ext¹(G_j, F_q)`.
//!
//! All sizes are returned as `log_p` exponents.

use super::{FiniteModule, ModuleError, RingContext};
use crate::linalg::{howell_form, kernel_basis, Matrix};
use crate::ring::RingSpec;

fn check(ctx: &RingContext, g: &FiniteModule, j: usize) -> Result<(), ModuleError> {
    if ctx.spec() != g.spec() {
        return Err(ModuleError::RingMismatch);
    }
    if j >= ctx.len() {
        return Err(ModuleError::NoSuchFactor(j));
    }
    Ok(())
}

/// `G_j = G / Q_j(T) G`, the component on which `Q_j(t)` acts as zero.
pub fn crt_component(
    ctx: &RingContext,
    g: &FiniteModule,
    j: usize,
) -> Result<FiniteModule, ModuleError> {
    check(ctx, g, j)?;
    if ctx.len() == 1 || g.is_zero() {
        return Ok(g.clone());
    }
    let qt = ctx.lift(j).eval_matrix(g.t_action());
    Ok(g.quotient(&qt.transpose().to_rows()))
}

/// Generators of `𝔪_j G` for `𝔪_j = (p, P̄_j(t))`, given that `G = G_j`.
fn maximal_ideal_gens(ctx: &RingContext, g: &FiniteModule, j: usize) -> Vec<Vec<u64>> {
    let md = *g.modulus();
    let m = g.rank();
    let pbar = ctx.residue_poly(j).eval_matrix(g.t_action());
    let mut gens: Vec<Vec<u64>> = (0..m)
        .map(|l| (0..m).map(|i| if i == l { md.p() } else { 0 }).collect())
        .collect();
    gens.extend(pbar.transpose().to_rows());
    gens
}

/// The component `G_j` together with a minimal set of `R`-generators: a
/// standard basis vector is kept whenever it is not already in
/// `𝔪_j G_j + ⟨kept⟩`, so the kept vectors map to an `F_q`-basis of
/// `G_j / 𝔪_j G_j`.
pub fn minimal_generators(
    ctx: &RingContext,
    g: &FiniteModule,
    j: usize,
) -> Result<(FiniteModule, Vec<Vec<u64>>), ModuleError> {
    let gj = crt_component(ctx, g, j)?;
    let m = gj.rank();
    let mut span_gens = maximal_ideal_gens(ctx, &gj, j);
    let mut key = gj.span_key(&span_gens);
    let mut kept = Vec::new();
    for l in 0..m {
        let e: Vec<u64> = (0..m).map(|i| u64::from(i == l)).collect();
        if !key.contains(&e) {
            span_gens.push(e.clone());
            kept.push(e);
            key = gj.span_key(&span_gens);
        }
    }
    Ok((gj, kept))
}

/// `log_p |Hom_R(G, F_(q_j))| = log_p |G_j / 𝔪_j G_j| = d_j s_j`.
pub fn hom_to_residue_field_size(
    ctx: &RingContext,
    g: &FiniteModule,
    j: usize,
) -> Result<u64, ModuleError> {
    let (gj, gens) = minimal_generators(ctx, g, j)?;
    let key = gj.span_key(&maximal_ideal_gens(ctx, &gj, j));
    let log = gj.log_size() - gj.key_log_size(&key);
    if log != (ctx.degree(j) * gens.len()) as u64 {
        return Err(ModuleError::Internal(
            "residue dimension disagrees with the generator count".into(),
        ));
    }
    Ok(log)
}

/// `log_p |Ext¹_R(G, F_(q_j))|`. The working precision is raised to
/// `max(k, e + 1)` where `p^e` is the exponent of `G`, which the syzygy
/// computation needs.
pub fn ext1_size(ctx: &RingContext, g: &FiniteModule, j: usize) -> Result<u64, ModuleError> {
    check(ctx, g, j)?;
    let need = g.exponent() + 1;
    if ctx.k() < need {
        let ctx = ctx.with_exponent(need)?;
        let g = g.with_exponent(need)?;
        return ext1_size_strict(&ctx, &g, j);
    }
    ext1_size_strict(ctx, g, j)
}

/// As [`ext1_size`] but failing with `KViolation` instead of raising `k`.
///
/// With a minimal surjection `R_j^s -> G_j` and syzygies `A`, the group is
/// `Hom(A, F_q)` modulo the image of `Hom(R_j^s, F_q)`, which vanishes for
/// a minimal surjection; hence `|Ext¹| = |A / 𝔪_j A|`.
pub fn ext1_size_strict(
    ctx: &RingContext,
    g: &FiniteModule,
    j: usize,
) -> Result<u64, ModuleError> {
    check(ctx, g, j)?;
    let k = ctx.k();
    if g.exponent() + 1 > k {
        return Err(ModuleError::KViolation {
            k,
            e: g.exponent(),
        });
    }
    let (gj, gens) = minimal_generators(ctx, g, j)?;
    let s = gens.len();
    if s == 0 {
        return Ok(0);
    }
    let md = *gj.modulus();
    let qj = ctx.lift(j);
    let dd = qj.deg().expect("lifted factor is monic");
    // Row (i, a) of Φ^T is T^a g_i, scaled so that L maps to zero.
    let mut phi_t = Matrix::zeros(md, s * dd, gj.rank());
    for (i, x) in gens.iter().enumerate() {
        for (a, row) in gj.orbit_rows(x, dd).into_iter().enumerate() {
            for (l, v) in row.into_iter().enumerate() {
                phi_t[(i * dd + a, l)] = md.mul(v, md.ppow(k - gj.exps()[l]));
            }
        }
    }
    let a = kernel_basis(&phi_t);
    let log_a = a.span_log_size();
    let pa = a.form.scale(md.p());
    if log_a - howell_form(&pa).span_log_size() != (s * dd) as u64 {
        return Err(ModuleError::Internal(format!(
            "dim A/pA differs from s·m·d = {}",
            s * dd
        )));
    }
    let c = RingSpec::new(md, qj.clone())?.companion_matrix();
    let pbar = ctx.residue_poly(j).eval_matrix(&c);
    let n = Matrix::identity(md, s).kron(&pbar);
    let na = a.form.mul(&n.transpose());
    let ma = howell_form(&pa.vstack(&na));
    Ok(log_a - ma.span_log_size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Modulus, Poly};

    fn ctx(p: u64, k: u32, c: &[u64]) -> RingContext {
        RingContext::new(RingSpec::new(Modulus::new(p, k).unwrap(), Poly::from(c.to_vec())).unwrap())
    }

    #[test]
    fn split_quadratic_components() {
        // P = t^2 + t over F_2, X = diag(0, 1): cok(P(X)) = F_2^2 with t = diag(0, 1).
        let c = ctx(2, 1, &[0, 1, 1]);
        let md = *c.spec().modulus();
        let g = FiniteModule::new(
            c.spec().clone(),
            vec![1, 1],
            Matrix::from_rows(md, &[vec![0, 0], vec![0, 1]]).unwrap(),
        )
        .unwrap();
        let sizes: Vec<u64> = (0..2)
            .map(|j| crt_component(&c, &g, j).unwrap().log_size())
            .collect();
        assert_eq!(sizes, vec![1, 1]);
    }

    #[test]
    fn residue_field_of_t_squared() {
        for p in [2u64, 3, 5] {
            let c = ctx(p, 1, &[0, 0, 1]);
            let g = FiniteModule::cyclic(c.spec().clone(), &Poly::x(), 1).unwrap();
            assert_eq!(hom_to_residue_field_size(&c, &g, 0).unwrap(), 1);
            assert_eq!(ext1_size(&c, &g, 0).unwrap(), 2);
            assert!(matches!(
                ext1_size_strict(&c, &g, 0),
                Err(ModuleError::KViolation { .. })
            ));
        }
    }

    #[test]
    fn zero_and_free_cyclic() {
        let c = ctx(3, 2, &[1, 0, 1]);
        let z = FiniteModule::zero(c.spec().clone());
        assert_eq!(hom_to_residue_field_size(&c, &z, 0).unwrap(), 0);
        assert_eq!(ext1_size(&c, &z, 0).unwrap(), 0);
        // R_j itself over the DVR Z/9[t]/(t^2+1): Hom = q, Ext = q.
        let g = FiniteModule::cyclic(c.spec().clone(), c.lift(0), 1).unwrap();
        assert_eq!(hom_to_residue_field_size(&c, &g, 0).unwrap(), 2);
        assert_eq!(ext1_size(&c, &g, 0).unwrap(), 2);
    }
}
