//! Counting solutions of linear systems whose equations live in a finite
//! abelian `p`-group `⊕ Z/p^(e_i)`.

use super::{howell_form, smith_normal_form, LinalgError, Matrix};

/// `log_p` of `#{x in (Z/p^k)^c : (A x)_i ≡ 0 mod p^(e_i) for all i}` for an
/// `r x c` matrix `A`.
///
/// Equation `i` holds iff `p^(k-e_i) (A x)_i = 0` in `Z/p^k`, so the count
/// is `p^(kc) / |image|` of the rescaled matrix, with the image size read
/// off the Howell form of its transpose.
pub fn count_solutions(a: &Matrix, targets: &[u32]) -> Result<u64, LinalgError> {
    let scaled = rescale(a, targets)?;
    let k = a.modulus().k() as u64;
    let image = howell_form(&scaled.transpose()).span_log_size();
    Ok(k * a.cols() as u64 - image)
}

/// The same count computed from Smith valuations; used as a cross-check.
pub fn count_solutions_snf(a: &Matrix, targets: &[u32]) -> Result<u64, LinalgError> {
    let scaled = rescale(a, targets)?;
    Ok(smith_normal_form(&scaled, false).kernel_log_size())
}

fn rescale(a: &Matrix, targets: &[u32]) -> Result<Matrix, LinalgError> {
    if targets.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: targets.len(),
        });
    }
    let md = *a.modulus();
    let k = md.k();
    if let Some(&e) = targets.iter().find(|&&e| e > k) {
        return Err(LinalgError::TargetExponent { e, k });
    }
    let mut scaled = a.clone();
    for (r, &e) in targets.iter().enumerate() {
        let s = md.ppow(k - e);
        if s == 1 {
            continue;
        }
        for c in 0..a.cols() {
            scaled[(r, c)] = md.mul(scaled[(r, c)], s);
        }
    }
    Ok(scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Modulus;
    use proptest::prelude::*;

    fn md(p: u64, k: u32) -> Modulus {
        Modulus::new(p, k).unwrap()
    }

    #[test]
    fn spec_examples() {
        let m = md(2, 2);
        let zero = Matrix::zeros(m, 1, 1);
        assert_eq!(count_solutions(&zero, &[2]).unwrap(), 2); // 4 solutions
        let two = Matrix::from_rows(m, &[vec![2]]).unwrap();
        assert_eq!(count_solutions(&two, &[2]).unwrap(), 1); // x in {0, 2}
        assert!(count_solutions(&two, &[2, 2]).is_err());
        assert!(count_solutions(&two, &[3]).is_err());
    }

    fn instance() -> impl Strategy<Value = (Matrix, Vec<u32>)> {
        (prop::sample::select(vec![(2u64, 1u32), (2, 2), (2, 3), (3, 2), (5, 1)]), 1usize..4, 1usize..4)
            .prop_flat_map(|((p, k), r, c)| {
                let m = md(p, k);
                (
                    prop::collection::vec(0..m.order(), r * c),
                    prop::collection::vec(0..=k, r),
                )
                    .prop_map(move |(d, e)| (Matrix::from_vec(m, r, c, d).unwrap(), e))
            })
    }

    proptest! {
        #[test]
        fn matches_enumeration((a, e) in instance()) {
            let md = *a.modulus();
            let q = md.order();
            let c = a.cols();
            let total = q.pow(c as u32);
            prop_assume!(total <= 1 << 16);
            let mut count = 0u64;
            for idx in 0..total {
                let mut x = Vec::with_capacity(c);
                let mut t = idx;
                for _ in 0..c {
                    x.push(t % q);
                    t /= q;
                }
                let y = a.mul_vec(&x);
                if y.iter().zip(&e).all(|(&yi, &ei)| yi % md.p().pow(ei) == 0) {
                    count += 1;
                }
            }
            let got = count_solutions(&a, &e).unwrap();
            prop_assert_eq!(count, md.p().pow(got as u32));
            prop_assert_eq!(got, count_solutions_snf(&a, &e).unwrap());
        }
    }
}
