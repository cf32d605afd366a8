use super::{Modulus, Poly, RingError};

/// `F_p[t]/(f)` for a monic irreducible `f` of degree `d`: a field of `p^d` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    fp: Modulus,
    modulus: Poly,
}

/// Coefficients of length `d` over `F_p`, reduced modulo the field polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqElement(Vec<u64>);

impl FqElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl FiniteField {
    pub fn new(p: u64, modulus: Poly) -> Result<Self, RingError> {
        let fp = Modulus::new(p, 1)?;
        let modulus = modulus.reduce(&fp);
        if !modulus.is_monic() || modulus.deg().unwrap_or(0) == 0 {
            return Err(RingError::NotMonic);
        }
        if !crate::factor::is_irreducible(&modulus, &fp) {
            return Err(RingError::NotIrreducible(modulus));
        }
        Ok(FiniteField { fp, modulus })
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg().expect("nonconstant")
    }

    /// Number of elements `p^d`.
    pub fn order(&self) -> u64 {
        self.fp.p().pow(self.degree() as u32)
    }

    fn wrap(&self, f: Poly) -> FqElement {
        let r = f.rem(&self.modulus, &self.fp).expect("monic");
        let mut c = r.coeffs().to_vec();
        c.resize(self.degree(), 0);
        FqElement(c)
    }

    pub fn element(&self, coeffs: &[u64]) -> FqElement {
        self.wrap(Poly::from(coeffs.to_vec()).reduce(&self.fp))
    }

    /// Element number `idx` in base-`p` digit order; `idx < p^d`.
    pub fn nth(&self, mut idx: u64) -> FqElement {
        let p = self.fp.p();
        let c: Vec<u64> = (0..self.degree())
            .map(|_| {
                let digit = idx % p;
                idx /= p;
                digit
            })
            .collect();
        FqElement(c)
    }

    pub fn zero(&self) -> FqElement {
        FqElement(vec![0; self.degree()])
    }

    pub fn one(&self) -> FqElement {
        self.element(&[1])
    }

    pub fn is_zero(&self, a: &FqElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElement, b: &FqElement) -> FqElement {
        FqElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.fp.add(x, y))
                .collect(),
        )
    }

    pub fn mul(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let prod = Poly::from(a.0.clone()).mul(&Poly::from(b.0.clone()), &self.fp);
        self.wrap(prod)
    }

    pub fn inv(&self, a: &FqElement) -> Result<FqElement, RingError> {
        if self.is_zero(a) {
            return Err(RingError::NonUnit);
        }
        let (g, s, _) = Poly::from(a.0.clone()).ext_gcd(&self.modulus, &self.fp);
        debug_assert_eq!(g, Poly::one());
        Ok(self.wrap(s))
    }
}
