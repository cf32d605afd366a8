//! Arithmetic in `Z/p^kZ` on machine words.

use serde::{Deserialize, Serialize};

use super::RingError;

/// Residues are stored reduced in `[0, p^k)`.
pub type Residue = u64;

/// The ring `Z/p^kZ` for a prime `p` with `p^k < 2^63`.
///
/// Elements are plain `u64` values; every operation here takes reduced
/// inputs and returns reduced outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ModulusRepr", into = "ModulusRepr")]
pub struct Modulus {
    p: u64,
    k: u32,
    q: u64,
    /// `q - 1` when `q` is a power of two.
    mask: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct ModulusRepr {
    p: u64,
    k: u32,
}

impl TryFrom<ModulusRepr> for Modulus {
    type Error = RingError;
    fn try_from(r: ModulusRepr) -> Result<Self, RingError> {
        Modulus::new(r.p, r.k)
    }
}

impl From<Modulus> for ModulusRepr {
    fn from(m: Modulus) -> Self {
        ModulusRepr { p: m.p, k: m.k }
    }
}

impl Modulus {
    pub fn new(p: u64, k: u32) -> Result<Self, RingError> {
        if k == 0 {
            return Err(RingError::ZeroExponent);
        }
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q
                .checked_mul(p)
                .filter(|&v| v < (1u64 << 63))
                .ok_or(RingError::ModulusTooLarge { p, k })?;
        }
        let mask = if p == 2 { Some(q - 1) } else { None };
        Ok(Modulus { p, k, q, mask })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `p^k`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.q
    }

    /// The same prime at a different exponent.
    pub fn with_exponent(&self, k: u32) -> Result<Self, RingError> {
        Modulus::new(self.p, k)
    }

    /// The residue field `Z/pZ`.
    pub fn residue_field(&self) -> Self {
        Modulus::new(self.p, 1).expect("p already validated")
    }

    /// `p^e` as an integer, `e <= k`.
    #[inline]
    pub fn ppow(&self, e: u32) -> u64 {
        debug_assert!(e <= self.k);
        self.p.pow(e)
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        match self.mask {
            Some(m) => a & m,
            None => a % self.q,
        }
    }

    #[inline]
    pub fn reduce_i64(&self, a: i64) -> u64 {
        let r = a.rem_euclid(self.q as i64);
        r as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if let Some(m) = self.mask {
            return a.wrapping_mul(b) & m;
        }
        if self.q <= u32::MAX as u64 {
            (a * b) % self.q
        } else {
            ((a as u128 * b as u128) % self.q as u128) as u64
        }
    }

    /// `a - f*b`, the elimination step.
    #[inline]
    pub fn sub_mul(&self, a: u64, f: u64, b: u64) -> u64 {
        self.sub(a, self.mul(f, b))
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.reduce(1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// p-adic valuation, with `v(0) = k`.
    #[inline]
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.k;
        }
        if self.p == 2 {
            return a.trailing_zeros().min(self.k);
        }
        let mut v = 0;
        let mut x = a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Splits a nonzero `a` as `p^v * u` with `u` a unit; returns `(v, u)`.
    ///
    /// The unit is only determined modulo `p^(k-v)`; the representative
    /// returned is `a / p^v` which is a unit mod `p^k`.
    #[inline]
    pub fn split(&self, a: u64) -> (u32, u64) {
        let v = self.valuation(a);
        if v == self.k {
            return (v, 0);
        }
        (v, a / self.p.pow(v))
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// Inverse of a unit, `None` for non-units.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        // Extended Euclid on (a, q).
        let (mut r0, mut r1) = (self.q as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let quo = r0 / r1;
            (r0, r1) = (r1, r0 - quo * r1);
            (t0, t1) = (t1, t0 - quo * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.q as i128) as u64)
    }

    /// Exact division `a / b` where `v(b) <= v(a)`: returns some `c` with `c*b = a`.
    pub fn div_exact(&self, a: u64, b: u64) -> Option<u64> {
        let (vb, ub) = self.split(b);
        if b == 0 {
            return if a == 0 { Some(0) } else { None };
        }
        let va = self.valuation(a);
        if va < vb {
            return None;
        }
        let ub_inv = self.inv(ub)?;
        Some(self.mul(a / self.p.pow(vb), ub_inv))
    }
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Modulus::new(4, 1), Err(RingError::NotPrime(4)));
        assert_eq!(Modulus::new(3, 0), Err(RingError::ZeroExponent));
        assert!(Modulus::new(2, 63).is_err());
        assert!(Modulus::new(2, 62).is_ok());
        assert!(Modulus::new(3, 40).is_err());
    }

    #[test]
    fn valuation_and_inverse() {
        let m = Modulus::new(3, 3).unwrap();
        assert_eq!(m.valuation(0), 3);
        assert_eq!(m.valuation(9), 2);
        assert_eq!(m.valuation(18), 2);
        assert_eq!(m.valuation(5), 0);
        for a in 0..27 {
            match m.inv(a) {
                Some(b) => assert_eq!(m.mul(a, b), 1),
                None => assert_eq!(a % 3, 0),
            }
        }
        let m2 = Modulus::new(2, 4).unwrap();
        assert_eq!(m2.valuation(8), 3);
        assert_eq!(m2.mul(15, 15), 1);
        assert_eq!(m2.div_exact(12, 4), Some(3));
        assert_eq!(m2.div_exact(4, 8), None);
    }
}
