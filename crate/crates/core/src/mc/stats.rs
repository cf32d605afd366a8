use crate::scalar::Real;

/// Wilson score interval for `count` successes in `n` trials at `z`
/// standard deviations.
pub fn wilson_interval<T: Real>(count: u64, n: u64, z: T) -> (T, T) {
    if n == 0 {
        return (T::zero(), T::one());
    }
    let nn = T::lit(n as f64);
    let phat = T::lit(count as f64) / nn;
    let z2 = z * z;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let denom = T::one() + z2 / nn;
    let center = (phat + z2 / (two * nn)) / denom;
    let half = z / denom * (phat * (T::one() - phat) / nn + z2 / (four * nn * nn)).sqrt();
    ((center - half).max(T::zero()), (center + half).min(T::one()))
}

/// `(freq - theory) / sqrt(theory (1 - theory) / n)`; zero when both the
/// deviation and the variance vanish.
pub fn z_score<T: Real>(count: u64, n: u64, theory: T) -> T {
    let nn = T::lit(n as f64);
    let diff = T::lit(count as f64) / nn - theory;
    let var = theory * (T::one() - theory) / nn;
    if var > T::zero() {
        diff / var.sqrt()
    } else if diff == T::zero() {
        T::zero()
    } else {
        T::infinity() * diff.signum()
    }
}

/// `½ Σ_i |a_i - b_i|` over paired entries.
pub fn tv_distance<T: Real>(a: &[T], b: &[T]) -> T {
    let sum = a
        .iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y).abs());
    sum / T::lit(2.0)
}
