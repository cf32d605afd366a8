use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_matrix, wilson_interval, McError, MeasureSpec};
use crate::module::{module_type, ModuleCatalog, RingContext};

/// Parameters of one Monte-Carlo run at a fixed matrix size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub samples: u64,
    pub measure: MeasureSpec,
    pub seed: u64,
    /// Worker threads; `None` uses the available parallelism. Never affects
    /// the result.
    #[serde(skip)]
    pub threads: Option<usize>,
}

/// Counts of sampled cokernel types over a catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub n: usize,
    pub samples: u64,
    /// Precision at which matrices were sampled and typed.
    pub k_sim: u32,
    /// Catalog ids, in catalog order.
    pub ids: Vec<String>,
    pub counts: Vec<u64>,
    /// Samples outside the catalog (including saturated ones).
    pub other: u64,
    /// Samples whose type is not determined at precision `k_sim`.
    pub saturated: u64,
    /// Smith-valuation multiplicities not divisible by the factor degree.
    pub violations: u64,
}

impl Tally {
    fn empty(n: usize, samples: u64, k_sim: u32, ids: Vec<String>) -> Self {
        let len = ids.len();
        Tally {
            n,
            samples,
            k_sim,
            ids,
            counts: vec![0; len],
            other: 0,
            saturated: 0,
            violations: 0,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.other += other.other;
        self.saturated += other.saturated;
        self.violations += other.violations;
        self
    }

    pub fn count(&self, id: &str) -> Option<u64> {
        self.ids.iter().position(|x| x == id).map(|i| self.counts[i])
    }

    pub fn frequency(&self, id: &str) -> Option<f64> {
        self.count(id).map(|c| c as f64 / self.samples as f64)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.samples as f64)
            .collect()
    }

    /// Wilson interval of entry `i` at `z` standard deviations.
    pub fn interval(&self, i: usize, z: f64) -> (f64, f64) {
        wilson_interval(self.counts[i], self.samples, z)
    }
}

/// The ring at the simulation precision `k + 1`: a type with all parts at
/// most `k` is then certified over `Z_p`.
pub fn simulation_context(ctx: &RingContext) -> Result<RingContext, McError> {
    ctx.with_exponent(ctx.k() + 1)
        .map_err(|e| McError::Module(e.into()))
}

/// The generator for sample `index` of a run with matrix size `n`.
pub fn sample_rng(seed: u64, n: usize, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index);
    rng
}

pub(crate) fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, McError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| McError::Pool(e.to_string()))
}

/// Samples `cfg.samples` matrices and tallies the types of `cok(P(X))`
/// against `catalog` (built over `ctx`).
pub fn run_experiment(
    ctx: &RingContext,
    catalog: &ModuleCatalog,
    cfg: &ExperimentConfig,
) -> Result<Tally, McError> {
    if cfg.samples == 0 {
        return Err(McError::InvalidConfig("at least one sample is required".into()));
    }
    if cfg.n == 0 {
        return Err(McError::InvalidConfig("n must be positive".into()));
    }
    let sim = simulation_context(ctx)?;
    let md = *sim.spec().modulus();
    let sampler = cfg.measure.sampler(md)?;
    let sim_catalog = if ctx.is_squarefree() {
        None
    } else {
        Some(catalog.with_exponent(&sim)?)
    };
    let ids: Vec<String> = catalog.entries().iter().map(|e| e.id.clone()).collect();
    let empty = || Tally::empty(cfg.n, cfg.samples, sim.k(), ids.clone());
    let pool = build_pool(cfg.threads)?;
    pool.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .try_fold(empty, |mut acc, i| {
                let mut rng = sample_rng(cfg.seed, cfg.n, i);
                let x = sample_matrix(cfg.n, md, &sampler, &mut rng);
                let out = module_type(&x, &sim, sim_catalog.as_ref())?;
                acc.violations += u64::from(out.violations);
                if out.saturated {
                    acc.saturated += 1;
                    acc.other += 1;
                } else if let Some(pos) = catalog.position(&out.module_type) {
                    acc.counts[pos] += 1;
                } else {
                    acc.other += 1;
                }
                Ok::<_, McError>(acc)
            })
            .try_reduce(empty, |a, b| Ok(a.merge(b)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::enumerate_catalog;
    use crate::ring::{Modulus, Poly, RingSpec};

    fn ctx(p: u64, k: u32, c: &[u64]) -> RingContext {
        RingContext::new(RingSpec::new(Modulus::new(p, k).unwrap(), Poly::from(c.to_vec())).unwrap())
    }

    #[test]
    fn thread_count_does_not_matter() {
        let c = ctx(2, 1, &[0, 1]);
        let cat = enumerate_catalog(&c, 4).unwrap();
        let mut cfg = ExperimentConfig {
            n: 6,
            samples: 2000,
            measure: MeasureSpec::haar(),
            seed: 11,
            threads: Some(1),
        };
        let a = run_experiment(&c, &cat, &cfg).unwrap();
        cfg.threads = Some(4);
        let b = run_experiment(&c, &cat, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.iter().sum::<u64>() + a.other, 2000);
        cfg.samples = 0;
        assert!(run_experiment(&c, &cat, &cfg).is_err());
    }

    #[test]
    fn streams_differ() {
        use rand::Rng;
        let a: u64 = sample_rng(1, 3, 0).random();
        let b: u64 = sample_rng(1, 3, 1).random();
        let c: u64 = sample_rng(1, 4, 0).random();
        assert!(a != b && a != c);
        assert_eq!(a, sample_rng(1, 3, 0).random::<u64>());
    }
}
