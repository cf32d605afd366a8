use serde::{Deserialize, Serialize};

use super::{Modulus, Poly, RingError};
use crate::linalg::Matrix;

/// The data `(p, k, P)` defining `Z/p^kZ` and `R = (Z/p^kZ)[t]/(P)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    modulus: Modulus,
    poly: Poly,
}

impl RingSpec {
    /// `poly` is reduced mod `p^k` and must be monic of degree at least one.
    pub fn new(modulus: Modulus, poly: Poly) -> Result<Self, RingError> {
        let poly = poly.reduce(&modulus);
        match poly.deg() {
            Some(d) if d >= 1 && poly.is_monic() => Ok(RingSpec { modulus, poly }),
            _ => Err(RingError::NotMonic),
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn k(&self) -> u32 {
        self.modulus.k()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// `deg P`, the rank of `R` over `Z/p^kZ`.
    pub fn degree(&self) -> usize {
        self.poly.deg().expect("validated at construction")
    }

    /// The same polynomial (canonical integer lift) at another precision.
    pub fn with_exponent(&self, k: u32) -> Result<Self, RingError> {
        let m = self.modulus.with_exponent(k)?;
        RingSpec::new(m, self.poly.change_modulus(&m))
    }

    /// Reduction of `P` modulo `p`.
    pub fn poly_mod_p(&self) -> Poly {
        self.poly.reduce(&self.modulus.residue_field())
    }

    /// `d x d` matrix of multiplication by `t` on the basis `1, t, ..., t^(d-1)`.
    ///
    /// Column `j < d-1` is `e_(j+1)`; the last column holds `-P_0, ..., -P_(d-1)`.
    pub fn companion_matrix(&self) -> Matrix {
        companion(&self.poly, &self.modulus)
    }

    pub fn zero(&self) -> RElement {
        RElement(vec![0; self.degree()])
    }

    pub fn one(&self) -> RElement {
        self.element_from_poly(&Poly::one())
    }

    /// The class of `t`.
    pub fn t(&self) -> RElement {
        self.element_from_poly(&Poly::x())
    }

    pub fn element_from_poly(&self, f: &Poly) -> RElement {
        let r = f
            .reduce(&self.modulus)
            .rem(&self.poly, &self.modulus)
            .expect("P is monic");
        let mut c = r.coeffs().to_vec();
        c.resize(self.degree(), 0);
        RElement(c)
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<RElement, RingError> {
        if coeffs.len() > self.degree() {
            return Err(RingError::RingMismatch);
        }
        Ok(self.element_from_poly(&Poly::from(coeffs.to_vec())))
    }

    fn check(&self, a: &RElement) -> Result<(), RingError> {
        if a.0.len() == self.degree() && a.0.iter().all(|&c| c < self.modulus.order()) {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    pub fn add(&self, a: &RElement, b: &RElement) -> Result<RElement, RingError> {
        self.check(a)?;
        self.check(b)?;
        let m = &self.modulus;
        Ok(RElement(
            a.0.iter().zip(&b.0).map(|(&x, &y)| m.add(x, y)).collect(),
        ))
    }

    pub fn sub(&self, a: &RElement, b: &RElement) -> Result<RElement, RingError> {
        self.check(a)?;
        self.check(b)?;
        let m = &self.modulus;
        Ok(RElement(
            a.0.iter().zip(&b.0).map(|(&x, &y)| m.sub(x, y)).collect(),
        ))
    }

    pub fn mul(&self, a: &RElement, b: &RElement) -> Result<RElement, RingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.element_from_poly(&a.to_poly().mul(&b.to_poly(), &self.modulus)))
    }

    /// An element is a unit iff it is coprime to `P` modulo `p`, i.e. its
    /// image in every residue field `F_p[t]/(P_j)` is nonzero.
    pub fn is_unit(&self, a: &RElement) -> bool {
        let fp = self.modulus.residue_field();
        let abar = a.to_poly().reduce(&fp);
        !abar.is_zero() && abar.gcd(&self.poly_mod_p(), &fp).deg() == Some(0)
    }

    /// Inverse modulo `p` by extended Euclid, then Newton lifting
    /// `b <- b(2 - ab)` which doubles the `p`-adic precision each round.
    pub fn inv(&self, a: &RElement) -> Result<RElement, RingError> {
        self.check(a)?;
        let fp = self.modulus.residue_field();
        let abar = a.to_poly().reduce(&fp);
        let (g, s, _) = abar.ext_gcd(&self.poly_mod_p(), &fp);
        if g.deg() != Some(0) {
            return Err(RingError::NonUnit);
        }
        let mut b = self.element_from_poly(&s);
        let two = self.element_from_poly(&Poly::constant(2 % self.modulus.order()));
        let mut precision = 1;
        while precision < self.k() {
            let ab = self.mul(a, &b)?;
            b = self.mul(&b, &self.sub(&two, &ab)?)?;
            precision *= 2;
        }
        debug_assert_eq!(self.mul(a, &b)?, self.one());
        Ok(b)
    }
}

/// Companion matrix of a monic polynomial over `Z/p^kZ`.
pub(crate) fn companion(f: &Poly, m: &Modulus) -> Matrix {
    let d = f.deg().expect("nonzero polynomial");
    let mut c = Matrix::zeros(*m, d, d);
    for j in 0..d.saturating_sub(1) {
        c[(j + 1, j)] = 1;
    }
    for i in 0..d {
        c[(i, d - 1)] = m.neg(f.coeff(i));
    }
    c
}

/// Element of `R`, as `c_0 + c_1 t + ... + c_(d-1) t^(d-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RElement(Vec<u64>);

impl RElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from(self.0.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(p: u64, k: u32, c: &[u64]) -> RingSpec {
        RingSpec::new(Modulus::new(p, k).unwrap(), Poly::from(c.to_vec())).unwrap()
    }

    #[test]
    fn t_squared_vanishes_mod_t_squared() {
        let r = spec(2, 2, &[0, 0, 1]);
        assert_eq!(r.mul(&r.t(), &r.t()).unwrap(), r.zero());
    }

    #[test]
    fn inverse_of_t_plus_one_in_f4() {
        let r = spec(2, 1, &[1, 1, 1]);
        let a = r.element(&[1, 1]).unwrap();
        let inv = r.inv(&a).unwrap();
        assert_eq!(inv, r.t());
        assert_eq!(r.mul(&a, &inv).unwrap(), r.one());
    }

    #[test]
    fn non_units_are_refused() {
        let r = spec(3, 2, &[2, 0, 1]); // t^2 - 1 = (t-1)(t+1) mod 3
        let a = r.element(&[8, 1]).unwrap(); // t - 1
        assert!(!r.is_unit(&a));
        assert_eq!(r.inv(&a), Err(RingError::NonUnit));
        assert_eq!(r.inv(&r.element(&[3]).unwrap()), Err(RingError::NonUnit));
    }

    #[test]
    fn rejects_non_monic() {
        let m = Modulus::new(2, 2).unwrap();
        assert_eq!(
            RingSpec::new(m, Poly::from(vec![1, 2])),
            Err(RingError::NotMonic)
        );
        assert_eq!(RingSpec::new(m, Poly::one()), Err(RingError::NotMonic));
        // Leading coefficient 5 = 1 mod 4.
        assert!(RingSpec::new(m, Poly::from(vec![1, 5])).is_ok());
    }

    #[test]
    fn companion_examples() {
        let r = spec(2, 2, &[0, 0, 1]);
        assert_eq!(r.companion_matrix().to_rows(), vec![vec![0, 0], vec![1, 0]]);
        let r = spec(2, 2, &[3, 1]); // t - 1
        assert_eq!(r.companion_matrix().to_rows(), vec![vec![1]]);
        let r = spec(2, 1, &[1, 1, 1]);
        let c = r.companion_matrix();
        assert_eq!(c.to_rows(), vec![vec![0, 1], vec![1, 1]]);
        assert!(r.poly().eval_matrix(&c).is_zero());
    }

    fn arb_spec() -> impl Strategy<Value = RingSpec> {
        (
            prop::sample::select(vec![2u64, 3, 5]),
            1u32..4,
            prop::collection::vec(0u64..1000, 1..5),
        )
            .prop_map(|(p, k, mut c)| {
                c.push(1);
                spec(p, k, &c)
            })
    }

    fn arb_elems(r: &RingSpec, n: usize) -> impl Strategy<Value = Vec<RElement>> {
        let r = r.clone();
        prop::collection::vec(prop::collection::vec(0u64..u64::MAX, r.degree()), n).prop_map(
            move |vs| {
                vs.iter()
                    .map(|v| {
                        let c: Vec<u64> = v.iter().map(|&x| x % r.modulus().order()).collect();
                        r.element(&c).unwrap()
                    })
                    .collect()
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms((r, xs) in arb_spec().prop_flat_map(|r| { let s = arb_elems(&r, 3); (Just(r), s) })) {
            let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
            let lhs = r.add(&r.add(a, b).unwrap(), c).unwrap();
            let rhs = r.add(a, &r.add(b, c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = r.mul(a, &r.add(b, c).unwrap()).unwrap();
            let rhs = r.add(&r.mul(a, b).unwrap(), &r.mul(a, c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = r.mul(&r.mul(a, b).unwrap(), c).unwrap();
            let rhs = r.mul(a, &r.mul(b, c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(r.mul(&r.one(), a).unwrap(), a.clone());
            if r.is_unit(a) {
                let inv = r.inv(a).unwrap();
                prop_assert_eq!(r.mul(a, &inv).unwrap(), r.one());
            } else {
                prop_assert!(r.inv(a).is_err());
            }
        }

        #[test]
        fn companion_annihilated_by_its_polynomial(r in arb_spec()) {
            let c = r.companion_matrix();
            prop_assert!(r.poly().eval_matrix(&c).is_zero());
            // Multiplying by t agrees with applying the companion matrix.
            let x = r.element_from_poly(&Poly::from(vec![1, 2, 3]));
            let tx = r.mul(&r.t(), &x).unwrap();
            prop_assert_eq!(c.mul_vec(x.coeffs()), tx.coeffs().to_vec());
        }
    }
}
