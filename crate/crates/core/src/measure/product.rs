use super::MeasureError;
use crate::scalar::Real;

/// `∏_{i=1}^{N} (1 - c q^-i)` together with a bound on the omitted tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncatedProduct<T> {
    pub value: T,
    /// Number of factors multiplied.
    pub terms: u32,
    /// Upper bound for `|log ∏_{i>N} (1 - c q^-i)|`; the infinite product
    /// lies in `[value · exp(-tail), value]`.
    pub tail: T,
}

impl<T: Real> TruncatedProduct<T> {
    /// Half-width of the enclosure `[value · exp(-tail), value]`, widened by
    /// the floating-point error of the multiplications.
    pub fn radius(&self) -> T {
        let rounding = T::epsilon() * T::lit(f64::from(self.terms) + 2.0);
        self.value * (self.tail + rounding)
    }
}

/// Evaluates `∏_{i>=1} (1 - c q^-i)` until the tail bound
/// `c q^-N / ((q - 1)(1 - c q^-(N+1)))` drops below `1e-14` (or a few ulps
/// for `f32`). Requires `c >= 0`, `q > 1` and `c < q`.
pub fn truncate_product<T: Real>(c: T, q: T) -> Result<TruncatedProduct<T>, MeasureError> {
    if !(c >= T::zero()) || !(q > T::one()) || !c.is_finite() || !q.is_finite() {
        return Err(MeasureError::InvalidParameters(format!("c = {c:?}, q = {q:?}")));
    }
    if c >= q {
        return Err(MeasureError::DivergentRatio {
            c: format!("{c:?}"),
            q: format!("{q:?}"),
        });
    }
    if c == T::zero() {
        return Ok(TruncatedProduct {
            value: T::one(),
            terms: 0,
            tail: T::zero(),
        });
    }
    let tol = T::lit(1e-14).max(T::epsilon() * T::lit(4.0));
    let one = T::one();
    let mut value = one;
    // x = c q^-N after N factors.
    let mut x = c;
    let mut terms = 0u32;
    loop {
        let next = x / q;
        let tail = x / ((q - one) * (one - next));
        if terms > 0 && tail < tol {
            return Ok(TruncatedProduct { value, terms, tail });
        }
        value = value * (one - next);
        x = next;
        terms += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_known_values() {
        let t = truncate_product(0.0f64, 2.0).unwrap();
        assert_eq!((t.value, t.terms), (1.0, 0));
        let t = truncate_product(1.0f64, 2.0).unwrap();
        let direct: f64 = (1..=60).map(|i| 1.0 - 0.5f64.powi(i)).product();
        assert!((t.value - direct).abs() < 1e-12);
        assert!((t.value - 0.288_788_095_086_602_4).abs() < 1e-12);
        assert!(t.tail < 1e-14);
        let t = truncate_product(1.0f64, 4.0).unwrap();
        assert!((t.value - 0.688_537_537_120_339).abs() < 1e-12);
        let t = truncate_product(1.0f32, 2.0).unwrap();
        assert!((t.value - 0.288_788_1).abs() < 1e-6);
    }

    #[test]
    fn divergence_is_rejected() {
        assert!(matches!(
            truncate_product(2.0f64, 2.0),
            Err(MeasureError::DivergentRatio { .. })
        ));
        assert!(truncate_product(-1.0f64, 2.0).is_err());
        assert!(truncate_product(0.5f64, 1.0).is_err());
    }
}
