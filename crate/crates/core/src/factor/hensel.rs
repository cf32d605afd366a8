//! Quadratic Hensel lifting of a coprime factorization from `F_p` to `Z/p^kZ`.

use super::FactorError;
use crate::ring::{Modulus, Poly};

/// Given monic `P` over `Z/p^k` and pairwise coprime monic `F_j` over `F_p`
/// with `∏ F_j = P mod p`, returns the unique monic `Q_j` over `Z/p^k` with
/// `Q_j ≡ F_j mod p` and `∏ Q_j = P`.
///
/// The list is split in halves recursively; each two-factor lift doubles the
/// precision per round using the cofactor Bézout identity.
pub fn hensel_lift(p_poly: &Poly, md: &Modulus, factors: &[Poly]) -> Result<Vec<Poly>, FactorError> {
    let fp = md.residue_field();
    let factors: Vec<Poly> = factors.iter().map(|f| f.reduce(&fp)).collect();
    if factors.iter().any(|f| !f.is_monic() || f.deg().unwrap_or(0) == 0) {
        return Err(FactorError::NotMonic);
    }
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if factors[i].gcd(&factors[j], &fp).deg() != Some(0) {
                return Err(FactorError::NotCoprime(i, j));
            }
        }
    }
    let prod = factors.iter().fold(Poly::one(), |a, f| a.mul(f, &fp));
    if prod != p_poly.reduce(&fp) {
        return Err(FactorError::ProductMismatch);
    }
    let mut out = Vec::with_capacity(factors.len());
    lift_all(&p_poly.reduce(md), md, &factors, &mut out);
    Ok(out)
}

fn lift_all(f: &Poly, md: &Modulus, factors: &[Poly], out: &mut Vec<Poly>) {
    match factors.len() {
        0 => {}
        1 => out.push(f.clone()),
        n => {
            let fp = md.residue_field();
            let (left, right) = factors.split_at(n / 2);
            let g0 = left.iter().fold(Poly::one(), |a, x| a.mul(x, &fp));
            let h0 = right.iter().fold(Poly::one(), |a, x| a.mul(x, &fp));
            let (g, h) = lift_pair(f, md, &g0, &h0);
            lift_all(&g, md, left, out);
            lift_all(&h, md, right, out);
        }
    }
}

/// Lifts `f ≡ g0 h0 mod p` to `f = g h mod p^k` with `g, h` monic.
fn lift_pair(f: &Poly, md: &Modulus, g0: &Poly, h0: &Poly) -> (Poly, Poly) {
    let fp = md.residue_field();
    let (one, s0, t0) = g0.ext_gcd(h0, &fp);
    debug_assert_eq!(one, Poly::one());
    let mut g = g0.change_modulus(md);
    let mut h = h0.change_modulus(md);
    let mut s = s0.change_modulus(md);
    let mut t = t0.change_modulus(md);
    let mut precision = 1;
    while precision < md.k() {
        // Factorization step: f ≡ g h mod p^(2 precision).
        let err = f.sub(&g.mul(&h, md), md);
        let (_, r) = s.mul(&err, md).divrem(&h, md).expect("monic");
        h = h.add(&r, md);
        g = f.divrem(&h, md).expect("monic").0;
        // Bézout step: s g + t h ≡ 1 mod p^(2 precision).
        let b = s.mul(&g, md).add(&t.mul(&h, md), md).sub(&Poly::one(), md);
        let (c, d) = s.mul(&b, md).divrem(&h, md).expect("monic");
        s = s.sub(&d, md);
        t = t.sub(&t.mul(&b, md), md).sub(&c.mul(&g, md), md);
        precision *= 2;
    }
    debug_assert_eq!(g.mul(&h, md), *f);
    (g, h)
}
