//! `|Aut_R(G)|`: closed form over the DVR components in the square-free
//! case, brute force otherwise.

use num_bigint::BigUint;
use num_traits::One;

use super::{
    count_sur_direct, minimal_generators, module_type_of, FiniteModule, ModuleError,
    ModulePresentation, ModuleType, RingContext,
};

/// Number of automorphisms of `⊕_i O/π^(λ_i)` for a DVR `O` with residue
/// field of size `q`:
/// `q^(Σ λ'_i² - Σ_i m_i(m_i+1)/2) · ∏_i ∏_(s=1..m_i) (q^s - 1)`,
/// where `λ'` is the conjugate partition and `m_i` the multiplicity of `i`.
pub fn aut_count_partition(lambda: &[u32], q: u64) -> BigUint {
    let top = lambda.iter().copied().max().unwrap_or(0);
    let q = BigUint::from(q);
    let mut exp: i64 = 0;
    let mut product = BigUint::one();
    for i in 1..=top {
        let conj = lambda.iter().filter(|&&x| x >= i).count() as i64;
        let mult = lambda.iter().filter(|&&x| x == i).count() as u32;
        exp += conj * conj - i64::from(mult) * i64::from(mult + 1) / 2;
        for s in 1..=mult {
            product *= q.pow(s) - 1u32;
        }
    }
    product * q.pow(u32::try_from(exp).expect("exponent is nonnegative"))
}

/// `|Aut_R(G)|`, by the closed form when `P mod p` is square-free and by
/// [`count_aut_brute`] otherwise.
pub fn count_aut(ctx: &RingContext, g: &FiniteModule) -> Result<BigUint, ModuleError> {
    if !ctx.is_squarefree() {
        return count_aut_brute(ctx, g);
    }
    match module_type_of(g, ctx)? {
        ModuleType::Partitions(parts) => Ok(parts
            .iter()
            .enumerate()
            .map(|(j, lambda)| aut_count_partition(lambda, ctx.field_size(j)))
            .product()),
        other => Err(ModuleError::Internal(format!(
            "square-free module typed as {other:?}"
        ))),
    }
}

/// `|Aut_R(G)| = ∏_j |Sur_R(G_j, G_j)|`, each factor counted by enumerating
/// the images of a minimal generating set.
pub fn count_aut_brute(ctx: &RingContext, g: &FiniteModule) -> Result<BigUint, ModuleError> {
    let mut total = BigUint::one();
    for j in 0..ctx.len() {
        let (gj, gens) = minimal_generators(ctx, g, j)?;
        if gj.is_zero() {
            continue;
        }
        let pres = ModulePresentation::from_module(&gj, &gens);
        total *= count_sur_direct(&pres, &gj, 1 << 20)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_small_cases() {
        assert_eq!(aut_count_partition(&[], 2), BigUint::one());
        assert_eq!(aut_count_partition(&[1], 2), BigUint::from(1u32));
        assert_eq!(aut_count_partition(&[1], 5), BigUint::from(4u32));
        assert_eq!(aut_count_partition(&[1, 1], 2), BigUint::from(6u32));
        assert_eq!(aut_count_partition(&[2, 1], 2), BigUint::from(8u32));
        assert_eq!(aut_count_partition(&[2], 3), BigUint::from(6u32));
        // |GL_3(F_2)| = 168.
        assert_eq!(aut_count_partition(&[1, 1, 1], 2), BigUint::from(168u32));
    }
}
