use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiment::build_pool;
use super::{sample_matrix, sample_rng, ExperimentConfig, McError};
use crate::module::{cokernel_r_generators, FiniteModule, RingContext, SubmoduleLattice};

/// Sample mean of `|Sur_R(cok(P(X)), G)|` with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub n: usize,
    pub samples: u64,
    /// Precision used for sampling: `max(k, e)` with `p^e` the exponent of `G`.
    pub k_work: u32,
    pub sum: u128,
    pub sum_sq: u128,
    pub mean: f64,
    pub std_err: f64,
    /// `(mean - 1) / std_err` (zero when both vanish).
    pub deviation: f64,
}

/// Sur counts depend only on the cokernel modulo `p^e`, so matrices are
/// sampled at precision `max(k, e)`.
pub(crate) fn moment_setup(
    ctx: &RingContext,
    g: &FiniteModule,
) -> Result<(RingContext, FiniteModule, SubmoduleLattice), McError> {
    let k = ctx.k().max(g.exponent());
    let ctx = ctx.with_exponent(k).map_err(|e| McError::Module(e.into()))?;
    let g = g.with_exponent(k)?;
    let lattice = SubmoduleLattice::new(&g, 8, 4096)?;
    Ok((ctx, g, lattice))
}

pub(crate) fn sur_count(lattice: &SubmoduleLattice, ctx: &RingContext, x: &crate::linalg::Matrix) -> Result<u128, McError> {
    let pres = cokernel_r_generators(x, ctx.spec());
    let sur = lattice.count_sur(&pres)?;
    u128::try_from(sur).map_err(|_| McError::InvalidConfig("surjection count exceeds 128 bits".into()))
}

/// `E|Sur_R(cok(P(X)), G)|` over `cfg.samples` random matrices.
pub fn empirical_moment(
    ctx: &RingContext,
    g: &FiniteModule,
    cfg: &ExperimentConfig,
) -> Result<MomentEstimate, McError> {
    if cfg.samples == 0 {
        return Err(McError::InvalidConfig("at least one sample is required".into()));
    }
    if cfg.n == 0 {
        return Err(McError::InvalidConfig("n must be positive".into()));
    }
    if g.spec() != ctx.spec() {
        return Err(McError::Module(crate::module::ModuleError::RingMismatch));
    }
    let (work, _, lattice) = moment_setup(ctx, g)?;
    let md = *work.spec().modulus();
    let sampler = cfg.measure.sampler(md)?;
    let pool = build_pool(cfg.threads)?;
    let (sum, sum_sq) = pool.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .try_fold(
                || (0u128, 0u128),
                |(s, s2), i| {
                    let mut rng = sample_rng(cfg.seed, cfg.n, i);
                    let x = sample_matrix(cfg.n, md, &sampler, &mut rng);
                    let v = sur_count(&lattice, &work, &x)?;
                    Ok::<_, McError>((s + v, s2 + v * v))
                },
            )
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
    })?;
    let n = cfg.samples as f64;
    let mean = sum as f64 / n;
    let var = if cfg.samples > 1 {
        ((sum_sq as f64 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let std_err = (var / n).sqrt();
    let deviation = if std_err > 0.0 {
        (mean - 1.0) / std_err
    } else if mean == 1.0 {
        0.0
    } else {
        f64::INFINITY * (mean - 1.0).signum()
    };
    Ok(MomentEstimate {
        n: cfg.n,
        samples: cfg.samples,
        k_work: work.k(),
        sum,
        sum_sq,
        mean,
        std_err,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::MeasureSpec;
    use crate::ring::{Modulus, Poly, RingSpec};

    #[test]
    fn zero_module_moment_is_exactly_one() {
        let c = RingContext::new(RingSpec::new(Modulus::new(2, 1).unwrap(), Poly::x()).unwrap());
        let g = FiniteModule::zero(c.spec().clone());
        let cfg = ExperimentConfig {
            n: 5,
            samples: 200,
            measure: MeasureSpec::haar(),
            seed: 3,
            threads: Some(2),
        };
        let m = empirical_moment(&c, &g, &cfg).unwrap();
        assert_eq!((m.sum, m.mean, m.std_err, m.deviation), (200, 1.0, 0.0, 0.0));
    }
}
