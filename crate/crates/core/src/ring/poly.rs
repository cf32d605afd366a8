//! Dense univariate polynomials over `Z/p^kZ`.
//!
//! A `Poly` carries no modulus of its own; callers pass the [`Modulus`]
//! with every operation. Coefficients are stored low-to-high with no
//! trailing zeros, so the zero polynomial is the empty vector.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Modulus, RingError};

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<u64>", into = "Vec<u64>")]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl From<Vec<u64>> for Poly {
    fn from(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }
}

impl From<Poly> for Vec<u64> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from low to high.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial text as typed on the command line: comma-separated integer
/// coefficients, low to high (`"0,0,1"` is `t^2`, `"-1,0,1"` is `t^2 - 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyText(pub Vec<i64>);

impl FromStr for PolyText {
    type Err = RingError;
    fn from_str(s: &str) -> Result<Self, RingError> {
        let coeffs = s
            .split(',')
            .map(|c| c.trim())
            .map(|c| {
                c.parse::<i64>()
                    .map_err(|_| RingError::PolyParse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyText(coeffs))
    }
}

impl PolyText {
    pub fn to_poly(&self, m: &Modulus) -> Poly {
        Poly::from(self.0.iter().map(|&c| m.reduce_i64(c)).collect::<Vec<_>>())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: u64) -> Self {
        Poly::from(vec![c])
    }

    /// `t`.
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    /// `t^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[n] = 1;
        Poly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree, treating the zero polynomial as having none.
    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// Reduces every coefficient into `[0, q)`.
    pub fn reduce(&self, m: &Modulus) -> Poly {
        Poly::from(self.coeffs.iter().map(|&c| m.reduce(c)).collect::<Vec<_>>())
    }

    pub fn add(&self, other: &Poly, m: &Modulus) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from(
            (0..n)
                .map(|i| m.add(self.coeff(i), other.coeff(i)))
                .collect::<Vec<_>>(),
        )
    }

    pub fn sub(&self, other: &Poly, m: &Modulus) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from(
            (0..n)
                .map(|i| m.sub(self.coeff(i), other.coeff(i)))
                .collect::<Vec<_>>(),
        )
    }

    pub fn neg(&self, m: &Modulus) -> Poly {
        Poly::from(self.coeffs.iter().map(|&c| m.neg(c)).collect::<Vec<_>>())
    }

    pub fn scale(&self, c: u64, m: &Modulus) -> Poly {
        Poly::from(self.coeffs.iter().map(|&a| m.mul(a, c)).collect::<Vec<_>>())
    }

    pub fn mul(&self, other: &Poly, m: &Modulus) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = m.add(out[i + j], m.mul(a, b));
            }
        }
        Poly::from(out)
    }

    pub fn pow(&self, e: u32, m: &Modulus) -> Poly {
        let mut r = Poly::one().reduce(m);
        for _ in 0..e {
            r = r.mul(self, m);
        }
        r
    }

    /// Euclidean division by a divisor with unit leading coefficient.
    pub fn divrem(&self, divisor: &Poly, m: &Modulus) -> Result<(Poly, Poly), RingError> {
        let db = divisor.deg().ok_or(RingError::DivisionByZero)?;
        let lead_inv = m.inv(divisor.lead()).ok_or(RingError::NonUnit)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![0u64; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = m.mul(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            quo[i - db] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - db + j] = m.sub_mul(rem[i - db + j], c, b);
            }
        }
        rem.truncate(db);
        Ok((Poly::from(quo), Poly::from(rem)))
    }

    pub fn rem(&self, divisor: &Poly, m: &Modulus) -> Result<Poly, RingError> {
        Ok(self.divrem(divisor, m)?.1)
    }

    /// Scales by the inverse of the leading coefficient.
    pub fn monic(&self, m: &Modulus) -> Result<Poly, RingError> {
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        let inv = m.inv(self.lead()).ok_or(RingError::NonUnit)?;
        Ok(self.scale(inv, m))
    }

    pub fn derivative(&self, m: &Modulus) -> Poly {
        Poly::from(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| m.mul(m.reduce(i as u64 % m.order()), c))
                .collect::<Vec<_>>(),
        )
    }

    pub fn eval(&self, x: u64, m: &Modulus) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }

    /// `self^e mod f`; `f` must have unit leading coefficient.
    pub fn powmod(&self, mut e: u128, f: &Poly, m: &Modulus) -> Result<Poly, RingError> {
        let mut base = self.rem(f, m)?;
        let mut r = Poly::one().reduce(m).rem(f, m)?;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base, m).rem(f, m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, m).rem(f, m)?;
            }
        }
        Ok(r)
    }

    /// Monic gcd over a field (`k = 1`).
    pub fn gcd(&self, other: &Poly, m: &Modulus) -> Poly {
        debug_assert_eq!(m.k(), 1);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, m).expect("nonzero divisor over a field");
            a = b;
            b = r;
        }
        a.monic(m).expect("field")
    }

    /// Extended gcd over a field: `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly, m: &Modulus) -> (Poly, Poly, Poly) {
        debug_assert_eq!(m.k(), 1);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, m).expect("field");
            let s2 = s0.sub(&q.mul(&s1, m), m);
            let t2 = t0.sub(&q.mul(&t1, m), m);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = m.inv(r0.lead()).expect("field");
        (r0.scale(inv, m), s0.scale(inv, m), t0.scale(inv, m))
    }

    /// For `f(t) = g(t^p)` over `F_p`, returns `g` (the p-th root, since
    /// Frobenius is the identity on `F_p`).
    pub fn pth_root(&self, m: &Modulus) -> Poly {
        let p = m.p() as usize;
        debug_assert!(self
            .coeffs
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || i % p == 0));
        Poly::from(self.coeffs.iter().step_by(p).copied().collect::<Vec<_>>())
    }

    /// Reduction `Z/p^kZ -> Z/p^jZ` for `j <= k`, or the canonical integer
    /// lift (coefficients kept in `[0, p^k)`) when `j > k`.
    pub fn change_modulus(&self, to: &Modulus) -> Poly {
        self.reduce(to)
    }
}
