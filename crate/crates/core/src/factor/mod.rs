//! Factorization of `P mod p` over `F_p` and Hensel lifting of the coprime
//! grouping `P = Q_1 ... Q_l` to `Z/p^kZ`.

mod fp_factor;
mod hensel;

pub use fp_factor::{distinct_degree, equal_degree, is_irreducible, squarefree_decomposition};
pub use hensel::hensel_lift;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{Modulus, Poly, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("factors {0} and {1} are not coprime modulo p")]
    NotCoprime(usize, usize),
    #[error("the product of the given factors is not P modulo p")]
    ProductMismatch,
    #[error("factors must be monic of degree >= 1")]
    NotMonic,
}

/// One irreducible factor `P_j` of `P mod p` with multiplicity `m` and degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IrreducibleFactor {
    pub poly: Poly,
    pub m: u32,
    pub d: usize,
}

impl IrreducibleFactor {
    /// `q_j = p^(d_j)`, the size of the residue field `F_p[t]/(P_j)`.
    pub fn field_size(&self, p: u64) -> u64 {
        p.pow(self.d as u32)
    }
}

/// `P mod p = ∏ P_j^(m_j)` together with the Hensel lifts `Q_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorData {
    pub factors: Vec<IrreducibleFactor>,
    pub lifts: Vec<Poly>,
    pub squarefree: bool,
}

impl FactorData {
    pub fn new(spec: &RingSpec) -> Self {
        let fp = spec.modulus().residue_field();
        let factors = factor_mod_p(&spec.poly_mod_p(), spec.p());
        let targets: Vec<Poly> = factors.iter().map(|f| f.poly.pow(f.m, &fp)).collect();
        let lifts = hensel_lift(spec.poly(), spec.modulus(), &targets)
            .expect("distinct irreducible powers are coprime");
        let squarefree = factors.iter().all(|f| f.m == 1);
        FactorData {
            factors,
            lifts,
            squarefree,
        }
    }

    /// Number `l` of distinct irreducible factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Factors a nonzero polynomial over `F_p` into monic irreducibles.
///
/// Output is sorted by `(degree, coefficients)`, independent of the random
/// choices made while splitting.
pub fn factor_mod_p(f: &Poly, p: u64) -> Vec<IrreducibleFactor> {
    let fp = Modulus::new(p, 1).expect("p is prime");
    let f = f.reduce(&fp).monic(&fp).expect("nonzero polynomial");
    let mut rng = splitting_rng(&f);
    let mut out = Vec::new();
    for (sq, m) in squarefree_decomposition(&f, &fp) {
        for (g, d) in distinct_degree(&sq, &fp) {
            for h in equal_degree(&g, d, &fp, &mut rng) {
                out.push(IrreducibleFactor { poly: h, m, d });
            }
        }
    }
    out.sort_by(|a, b| (a.d, &a.poly).cmp(&(b.d, &b.poly)));
    out
}

/// Seeded from the input so repeated calls make identical random choices.
fn splitting_rng(f: &Poly) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let seed = f
        .coeffs()
        .iter()
        .fold(0x9e37_79b9_7f4a_7c15u64, |h, &c| {
            (h ^ c).wrapping_mul(0x0100_0000_01b3)
        });
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> Modulus {
        Modulus::new(p, 1).unwrap()
    }

    fn poly(c: &[u64]) -> Poly {
        Poly::from(c.to_vec())
    }

    fn product(fs: &[IrreducibleFactor], m: &Modulus) -> Poly {
        fs.iter()
            .fold(Poly::one(), |acc, f| acc.mul(&f.poly.pow(f.m, m), m))
    }

    #[test]
    fn t_squared_mod_2() {
        let fs = factor_mod_p(&poly(&[0, 0, 1]), 2);
        assert_eq!(
            fs,
            vec![IrreducibleFactor {
                poly: poly(&[0, 1]),
                m: 2,
                d: 1
            }]
        );
    }

    #[test]
    fn t_squared_minus_one_mod_3() {
        let fs = factor_mod_p(&poly(&[2, 0, 1]), 3);
        let polys: Vec<Poly> = fs.iter().map(|f| f.poly.clone()).collect();
        assert_eq!(polys, vec![poly(&[1, 1]), poly(&[2, 1])]);
        assert!(fs.iter().all(|f| f.m == 1 && f.d == 1));
    }

    #[test]
    fn f4_modulus_is_irreducible() {
        let f = poly(&[1, 1, 1]);
        // No roots in F_2 and hence no linear factor.
        assert!((0..2).all(|x| f.eval(x, &fp(2)) != 0));
        let fs = factor_mod_p(&f, 2);
        assert_eq!(fs.len(), 1);
        assert_eq!((fs[0].m, fs[0].d), (1, 2));
    }

    #[test]
    fn pth_power_inputs() {
        // (t+1)^4 = t^4 + 1 over F_2, and t (t^2+1)^3 over F_3.
        let fs = factor_mod_p(&poly(&[1, 0, 0, 0, 1]), 2);
        assert_eq!(fs, vec![IrreducibleFactor { poly: poly(&[1, 1]), m: 4, d: 1 }]);
        let f = poly(&[1, 0, 1]).pow(3, &fp(3)).mul(&poly(&[0, 1]), &fp(3));
        let fs = factor_mod_p(&f, 3);
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs, &fp(3)), f);
    }

    #[test]
    fn factor_data_for_split_quadratic() {
        let m = Modulus::new(2, 2).unwrap();
        let spec = RingSpec::new(m, poly(&[2, 3, 1])).unwrap();
        let fd = FactorData::new(&spec);
        assert!(fd.squarefree);
        assert_eq!(fd.lifts, vec![poly(&[2, 1]), poly(&[1, 1])]);
    }

    /// Exhaustive over all monic polynomials of degree <= 4 over F_2.
    #[test]
    fn exhaustive_degree_four_over_f2() {
        let f2 = fp(2);
        for d in 1..=4usize {
            for bits in 0..(1u64 << d) {
                let mut c: Vec<u64> = (0..d).map(|i| (bits >> i) & 1).collect();
                c.push(1);
                let f = Poly::from(c);
                let fs = factor_mod_p(&f, 2);
                assert_eq!(product(&fs, &f2), f);
                for g in &fs {
                    assert!(is_irreducible(&g.poly, &f2));
                    assert_eq!(g.poly.deg(), Some(g.d));
                }
                let distinct: std::collections::BTreeSet<_> = fs.iter().map(|g| &g.poly).collect();
                assert_eq!(distinct.len(), fs.len());
            }
        }
    }

    /// Irreducible polynomials over F_2 by degree: 2, 1, 2, 3, 6, 9.
    #[test]
    fn irreducible_counts_over_f2() {
        let f2 = fp(2);
        let expected = [2usize, 1, 2, 3, 6, 9];
        for (d, &want) in (1..=6usize).zip(&expected) {
            let count = (0..(1u64 << d))
                .filter(|&bits| {
                    let mut c: Vec<u64> = (0..d).map(|i| (bits >> i) & 1).collect();
                    c.push(1);
                    is_irreducible(&Poly::from(c), &f2)
                })
                .count();
            assert_eq!(count, want, "degree {d}");
        }
    }

    proptest! {
        #[test]
        fn reconstructs_random_inputs(p in prop::sample::select(vec![2u64, 3, 5]), c in prop::collection::vec(0u64..5, 0..6)) {
            let m = fp(p);
            let mut c = c;
            c.push(1);
            let f = Poly::from(c).reduce(&m);
            let fs = factor_mod_p(&f, p);
            prop_assert_eq!(product(&fs, &m), f.clone());
            for g in &fs {
                prop_assert!(is_irreducible(&g.poly, &m));
                // Certificate: P_j divides t^(p^d) - t.
                let x = Poly::x();
                let frob = x.powmod((p as u128).pow(g.d as u32), &g.poly, &m).unwrap();
                prop_assert!(frob.sub(&x, &m).rem(&g.poly, &m).unwrap().is_zero());
            }
            let sum: usize = fs.iter().map(|g| g.d * g.m as usize).sum();
            prop_assert_eq!(Some(sum), f.deg());
            let sorted = fs.windows(2).all(|w| (w[0].d, &w[0].poly) < (w[1].d, &w[1].poly));
            prop_assert!(sorted);
        }
    }
}
