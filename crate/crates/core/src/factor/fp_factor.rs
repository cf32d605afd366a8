//! Square-free, distinct-degree and equal-degree (Cantor–Zassenhaus)
//! factorization over `F_p`.

use rand::Rng;

use crate::ring::{Modulus, Poly};

/// Monic square-free `g_i` with `f = ∏ g_i^(m_i)`, the `g_i` pairwise coprime.
///
/// Yun-style splitting on `gcd(f, f')`; the part where the derivative
/// vanishes is a polynomial in `t^p` and is handled by taking its `p`-th root.
pub fn squarefree_decomposition(f: &Poly, fp: &Modulus) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    collect_squarefree(&f.monic(fp).expect("nonzero"), 1, fp, &mut out);
    out
}

fn collect_squarefree(f: &Poly, scale: u32, fp: &Modulus, out: &mut Vec<(Poly, u32)>) {
    if f.deg() == Some(0) {
        return;
    }
    let one = Poly::one();
    let mut c = f.gcd(&f.derivative(fp), fp);
    let mut w = f.divrem(&c, fp).expect("monic gcd").0;
    let mut i = 1;
    while w != one {
        let y = w.gcd(&c, fp);
        let z = w.divrem(&y, fp).expect("monic").0;
        if z != one {
            out.push((z, i * scale));
        }
        i += 1;
        c = c.divrem(&y, fp).expect("monic").0;
        w = y;
    }
    if c != one {
        let root = c.pth_root(fp);
        collect_squarefree(&root, scale * fp.p() as u32, fp, out);
    }
}

/// Splits a square-free monic `f` into `(g_d, d)` where `g_d` is the product
/// of all irreducible factors of degree `d`.
pub fn distinct_degree(f: &Poly, fp: &Modulus) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let x = Poly::x();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.deg().is_some_and(|n| n >= 2 * d) {
        h = h.powmod(fp.p() as u128, &rest, fp).expect("monic");
        let g = rest.gcd(&h.sub(&x, fp), fp);
        if g.deg() != Some(0) {
            rest = rest.divrem(&g, fp).expect("monic").0;
            h = h.rem(&rest, fp).expect("monic");
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(n) = rest.deg().filter(|&n| n > 0) {
        out.push((rest, n));
    }
    out
}

/// Splits `f`, a product of distinct monic irreducibles all of degree `d`,
/// into those factors.
pub fn equal_degree<R: Rng>(f: &Poly, d: usize, fp: &Modulus, rng: &mut R) -> Vec<Poly> {
    let n = f.deg().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a = Poly::from((0..n).map(|_| rng.random_range(0..fp.p())).collect::<Vec<_>>());
        if a.deg().is_none_or(|e| e == 0) {
            continue;
        }
        let g = f.gcd(&a, fp);
        let split = if g.deg() != Some(0) {
            g
        } else {
            let b = splitting_element(&a, f, d, fp);
            f.gcd(&b, fp)
        };
        if let Some(e) = split.deg().filter(|&e| e > 0 && e < n) {
            debug_assert_eq!(e % d, 0);
            let other = f.divrem(&split, fp).expect("monic").0;
            let mut out = equal_degree(&split, d, fp, rng);
            out.extend(equal_degree(&other, d, fp, rng));
            return out;
        }
    }
}

/// For odd `p`: `a^((q-1)/2) - 1` with `q = p^d`, computed as the norm
/// `a^(1 + p + ... + p^(d-1))` raised to `(p-1)/2` so no exponent overflows.
/// For `p = 2`: the trace `a + a^2 + ... + a^(2^(d-1))`.
fn splitting_element(a: &Poly, f: &Poly, d: usize, fp: &Modulus) -> Poly {
    let p = fp.p();
    let mut frob = a.rem(f, fp).expect("monic");
    let mut acc = frob.clone();
    for _ in 1..d {
        frob = frob.powmod(p as u128, f, fp).expect("monic");
        acc = if p == 2 {
            acc.add(&frob, fp)
        } else {
            acc.mul(&frob, fp).rem(f, fp).expect("monic")
        };
    }
    if p == 2 {
        acc
    } else {
        acc.powmod(((p - 1) / 2) as u128, f, fp)
            .expect("monic")
            .sub(&Poly::one(), fp)
    }
}

/// Rabin's test: `f` of degree `n` is irreducible iff `t^(p^n) ≡ t mod f`
/// and `gcd(t^(p^(n/r)) - t, f) = 1` for every prime `r | n`.
pub fn is_irreducible(f: &Poly, fp: &Modulus) -> bool {
    let Some(n) = f.deg() else { return false };
    if n == 0 {
        return false;
    }
    let Ok(f) = f.monic(fp) else { return false };
    let x = Poly::x();
    let p = fp.p() as u128;
    // frobs[i] = t^(p^i) mod f for i = 0..=n.
    let mut frobs = vec![x.rem(&f, fp).expect("monic")];
    for i in 0..n {
        let next = frobs[i].powmod(p, &f, fp).expect("monic");
        frobs.push(next);
    }
    if frobs[n] != frobs[0] {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let g = f.gcd(&frobs[n / r].sub(&x, fp), fp);
        g.deg() == Some(0)
    })
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut r = 2;
    while r * r <= n {
        if n % r == 0 {
            out.push(r);
            while n % r == 0 {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
