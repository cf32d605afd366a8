//! Howell normal form of a row span over the chain ring `Z/p^kZ`.
//!
//! Echelon form alone is not canonical here: a row with pivot `p^v` also
//! spans `p^(k-v)` times itself, whose pivot column vanishes but whose tail
//! may not be reachable from the later rows. Pushing that multiple back into
//! the pool before moving on gives the Howell property: for every column
//! `c`, the rows with pivot at or after `c` span every element of the row
//! span that vanishes before `c`.

use super::Matrix;

/// Canonical generators of a row span.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HowellResult {
    /// Nonzero rows in pivot order; row `i` is zero before `pivots[i].0` and
    /// equals `p^(pivots[i].1)` there; entries above a pivot are reduced
    /// modulo that pivot.
    pub form: Matrix,
    /// `(column, valuation)` of each pivot.
    pub pivots: Vec<(usize, u32)>,
}

impl HowellResult {
    /// `log_p` of the number of elements of the row span.
    pub fn span_log_size(&self) -> u64 {
        let k = self.form.modulus().k();
        self.pivots.iter().map(|&(_, v)| (k - v) as u64).sum()
    }

    /// Reduces `x` against the form; the result is zero iff `x` lies in the span.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        let md = *self.form.modulus();
        let mut x = x.to_vec();
        for (i, &(c, v)) in self.pivots.iter().enumerate() {
            let pv = md.ppow(v);
            let f = x[c] / pv;
            if f == 0 {
                continue;
            }
            for (xj, &rj) in x.iter_mut().zip(self.form.row(i)).skip(c) {
                *xj = md.sub_mul(*xj, f, rj);
            }
        }
        x
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.reduce(x).iter().all(|&c| c == 0)
    }
}

/// Howell form of the row span of `m`.
pub fn howell_form(m: &Matrix) -> HowellResult {
    let md = *m.modulus();
    let k = md.k();
    let cols = m.cols();
    let mut pool: Vec<Vec<u64>> = m
        .to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut pivots = Vec::new();

    for c in 0..cols {
        let best = pool
            .iter()
            .enumerate()
            .filter(|(_, r)| r[c] != 0)
            .min_by_key(|&(i, r)| (md.valuation(r[c]), i))
            .map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let mut piv = pool.swap_remove(bi);
        let (v, unit) = md.split(piv[c]);
        if unit != 1 {
            let ui = md.inv(unit).expect("unit part");
            for x in piv.iter_mut().skip(c) {
                *x = md.mul(*x, ui);
            }
        }
        let pv = md.ppow(v);
        for r in pool.iter_mut() {
            let f = r[c] / pv;
            if r[c] == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(&piv).skip(c) {
                *x = md.sub_mul(*x, f, y);
            }
        }
        if v > 0 {
            let s = md.ppow(k - v);
            let extra: Vec<u64> = piv.iter().map(|&x| md.mul(x, s)).collect();
            if extra.iter().any(|&x| x != 0) {
                pool.push(extra);
            }
        }
        pool.retain(|r| r.iter().any(|&x| x != 0));
        out.push(piv);
        pivots.push((c, v));
    }
    debug_assert!(pool.is_empty());

    // Reduce entries above each pivot into [0, p^v).
    for i in 0..out.len() {
        let (c, v) = pivots[i];
        let pv = md.ppow(v);
        let (head, tail) = out.split_at_mut(i);
        let piv = &tail[0];
        for r in head.iter_mut() {
            let f = r[c] / pv;
            if f == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(piv).skip(c) {
                *x = md.sub_mul(*x, f, y);
            }
        }
    }

    let form = Matrix::from_vec(md, out.len(), cols, out.concat()).expect("shape");
    HowellResult { form, pivots }
}

/// `log_p` of the size of the row span of `m`.
pub fn span_log_size(m: &Matrix) -> u64 {
    howell_form(m).span_log_size()
}

/// Generators (as rows) of the left kernel `{x : x m = 0}`, read off the
/// Howell form of `[m | I]`. The result is itself in Howell form.
pub fn kernel_basis(m: &Matrix) -> HowellResult {
    let md = *m.modulus();
    let aug = m.hstack(&Matrix::identity(md, m.rows()));
    let h = howell_form(&aug);
    let c0 = m.cols();
    let mut rows = Vec::new();
    let mut pivots = Vec::new();
    for (i, &(c, v)) in h.pivots.iter().enumerate() {
        if c >= c0 {
            rows.extend_from_slice(&h.form.row(i)[c0..]);
            pivots.push((c - c0, v));
        }
    }
    let form = Matrix::from_vec(md, pivots.len(), m.rows(), rows).expect("shape");
    HowellResult { form, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Modulus;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn md(p: u64, k: u32) -> Modulus {
        Modulus::new(p, k).unwrap()
    }

    fn all_vectors(q: u64, n: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..q).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn row_span(m: &Matrix) -> BTreeSet<Vec<u64>> {
        let q = m.modulus().order();
        all_vectors(q, m.rows())
            .into_iter()
            .map(|x| m.transpose().mul_vec(&x))
            .collect()
    }

    #[test]
    fn identity_form() {
        let m = md(2, 3);
        let h = howell_form(&Matrix::identity(m, 3));
        assert_eq!(h.form, Matrix::identity(m, 3));
        assert_eq!(kernel_basis(&Matrix::identity(m, 3)).pivots.len(), 0);
    }

    #[test]
    fn two_over_z4() {
        let m = md(2, 2);
        let a = Matrix::from_rows(m, &[vec![2]]).unwrap();
        let h = howell_form(&a);
        assert_eq!(h.form.to_rows(), vec![vec![2]]);
        let k = kernel_basis(&a);
        assert_eq!(k.form.to_rows(), vec![vec![2]]);
    }

    /// `[2, 1]` over `Z/4`: the span contains `2 * [2, 1] = [0, 2]`, which
    /// plain echelon form would miss as a generator.
    #[test]
    fn howell_property_row() {
        let m = md(2, 2);
        let a = Matrix::from_rows(m, &[vec![2, 1]]).unwrap();
        let h = howell_form(&a);
        assert_eq!(h.form.to_rows(), vec![vec![2, 1], vec![0, 2]]);
        assert_eq!(h.span_log_size(), 2);
    }

    fn arb_small() -> impl Strategy<Value = Matrix> {
        (prop::sample::select(vec![(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2)]), 1usize..4, 1usize..4)
            .prop_flat_map(|((p, k), r, c)| {
                let m = md(p, k);
                prop::collection::vec(0..m.order(), r * c)
                    .prop_map(move |d| Matrix::from_vec(m, r, c, d).unwrap())
            })
    }

    proptest! {
        #[test]
        fn span_and_kernel_match_enumeration(a in arb_small()) {
            let h = howell_form(&a);
            let span = row_span(&a);
            prop_assert_eq!(span.len() as u64, a.modulus().p().pow(h.span_log_size() as u32));
            for x in &span {
                prop_assert!(h.contains(x));
            }
            let q = a.modulus().order();
            let all = all_vectors(q, a.cols());
            let inside = all.iter().filter(|x| h.contains(x)).count();
            prop_assert_eq!(inside, span.len());

            let kb = kernel_basis(&a);
            for r in 0..kb.form.rows() {
                prop_assert!(a.transpose().mul_vec(kb.form.row(r)).iter().all(|&x| x == 0));
            }
            let kernel_count = all_vectors(q, a.rows())
                .into_iter()
                .filter(|x| a.transpose().mul_vec(x).iter().all(|&y| y == 0))
                .count() as u64;
            prop_assert_eq!(kernel_count, a.modulus().p().pow(kb.span_log_size() as u32));
            prop_assert_eq!(kernel_count * span.len() as u64, q.pow(a.rows() as u32));
        }

        #[test]
        fn canonical_under_row_operations(a in arb_small(), seed in any::<u64>()) {
            // Multiply by a random invertible (unit lower-triangular times permutation) matrix.
            let md = *a.modulus();
            let r = a.rows();
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); s >> 33 };
            let mut l = Matrix::identity(md, r);
            for i in 0..r {
                for j in 0..i {
                    l[(i, j)] = md.reduce(next());
                }
            }
            let mut b = l.mul(&a);
            if r > 1 {
                b.swap_rows(0, r - 1);
            }
            let mut extra = a.clone();
            extra = extra.vstack(&a.scale(md.p()));
            prop_assert_eq!(howell_form(&a), howell_form(&b));
            prop_assert_eq!(howell_form(&a), howell_form(&extra));
        }
    }
}
