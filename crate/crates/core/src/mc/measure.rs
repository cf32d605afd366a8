use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::McError;
use crate::linalg::Matrix;
use crate::ring::Modulus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Haar,
    Bernoulli01,
    Custom,
}

/// Entry distribution of the random matrices.
///
/// `Custom` holds probabilities of the residues `0..p^level`; it induces a
/// distribution modulo any `p^k` with `k <= level`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<f64>>,
}

impl MeasureSpec {
    pub fn haar() -> Self {
        MeasureSpec {
            kind: MeasureKind::Haar,
            table: None,
        }
    }

    pub fn bernoulli01() -> Self {
        MeasureSpec {
            kind: MeasureKind::Bernoulli01,
            table: None,
        }
    }

    /// Validates a probability table over `Z/p^level` (length `p^level`,
    /// nonnegative, summing to 1 within `1e-12`, and `ε > 0`).
    pub fn custom(p: u64, table: Vec<f64>) -> Result<Self, McError> {
        let spec = MeasureSpec {
            kind: MeasureKind::Custom,
            table: Some(table),
        };
        spec.level(p)?;
        Ok(spec)
    }

    /// Precision of a custom table (`None` for the built-in measures, which
    /// exist at every level).
    pub fn level(&self, p: u64) -> Result<Option<u32>, McError> {
        let Some(table) = &self.table else {
            return Ok(None);
        };
        let mut len = 1u64;
        let mut level = 0u32;
        while len < table.len() as u64 {
            len *= p;
            level += 1;
        }
        if len != table.len() as u64 || level == 0 {
            return Err(McError::InvalidMeasure(format!(
                "table length {} is not a positive power of {p}",
                table.len()
            )));
        }
        if table.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(McError::InvalidMeasure("negative or non-finite probability".into()));
        }
        let total: f64 = table.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(McError::InvalidMeasure(format!("probabilities sum to {total}")));
        }
        let eps = epsilon_of(table, p);
        if !(eps > 0.0) {
            return Err(McError::InvalidMeasure(
                "ε = 0: some residue class mod p carries all the mass".into(),
            ));
        }
        Ok(Some(level))
    }

    /// `ε = 1 - max_a Prob(x ≡ a mod p)`.
    pub fn epsilon(&self, p: u64) -> f64 {
        match self.kind {
            MeasureKind::Haar => 1.0 - 1.0 / p as f64,
            MeasureKind::Bernoulli01 => 0.5,
            MeasureKind::Custom => epsilon_of(self.table.as_deref().unwrap_or(&[]), p),
        }
    }

    /// Short name used in manifests and file names.
    pub fn name(&self) -> &'static str {
        match self.kind {
            MeasureKind::Haar => "haar",
            MeasureKind::Bernoulli01 => "bernoulli01",
            MeasureKind::Custom => "custom",
        }
    }

    /// Sampler of residues modulo `md`; custom tables are summed over
    /// classes modulo `md` and must be given at least at that precision.
    pub fn sampler(&self, md: Modulus) -> Result<EntrySampler, McError> {
        Ok(match self.kind {
            MeasureKind::Haar => EntrySampler::Uniform(md.order()),
            MeasureKind::Bernoulli01 => EntrySampler::Bernoulli,
            MeasureKind::Custom => {
                let level = self.level(md.p())?.expect("custom tables have a level");
                if level < md.k() {
                    return Err(McError::InvalidMeasure(format!(
                        "table is given modulo p^{level} but sampling needs p^{}",
                        md.k()
                    )));
                }
                let table = self.table.as_ref().expect("custom tables are present");
                let mut reduced = vec![0.0; md.order() as usize];
                for (x, &w) in table.iter().enumerate() {
                    reduced[(x as u64 % md.order()) as usize] += w;
                }
                let dist = WeightedIndex::new(&reduced)
                    .map_err(|e| McError::InvalidMeasure(e.to_string()))?;
                EntrySampler::Table(dist)
            }
        })
    }
}

fn epsilon_of(table: &[f64], p: u64) -> f64 {
    let mut classes = vec![0.0; p as usize];
    for (x, &w) in table.iter().enumerate() {
        classes[x % p as usize] += w;
    }
    1.0 - classes.into_iter().fold(0.0, f64::max)
}

/// A ready-to-use entry distribution over `Z/p^k`.
#[derive(Clone, Debug)]
pub enum EntrySampler {
    Uniform(u64),
    Bernoulli,
    Table(WeightedIndex<f64>),
}

impl EntrySampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            EntrySampler::Uniform(q) => rng.random_range(0..*q),
            EntrySampler::Bernoulli => u64::from(rng.random::<bool>()),
            EntrySampler::Table(dist) => dist.sample(rng) as u64,
        }
    }
}

/// `n x n` matrix with independent entries drawn in row-major order.
pub fn sample_matrix<R: Rng + ?Sized>(
    n: usize,
    md: Modulus,
    sampler: &EntrySampler,
    rng: &mut R,
) -> Matrix {
    let data = (0..n * n).map(|_| sampler.draw(rng)).collect();
    Matrix::from_vec(md, n, n, data).expect("n*n entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation_and_epsilon() {
        assert_eq!(MeasureSpec::haar().epsilon(2), 0.5);
        assert_eq!(MeasureSpec::bernoulli01().epsilon(3), 0.5);
        let m = MeasureSpec::custom(2, vec![0.9, 0.1]).unwrap();
        assert!((m.epsilon(2) - 0.1).abs() < 1e-15);
        assert!(MeasureSpec::custom(2, vec![1.0, 0.0]).is_err());
        assert!(MeasureSpec::custom(2, vec![0.5, 0.4]).is_err());
        assert!(MeasureSpec::custom(2, vec![0.5, 0.25, 0.25]).is_err());
        // Mass 1 on even residues mod 4: ε = 0.
        assert!(MeasureSpec::custom(2, vec![0.5, 0.0, 0.5, 0.0]).is_err());
    }

    #[test]
    fn supports_and_levels() {
        let md = Modulus::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = MeasureSpec::bernoulli01().sampler(md).unwrap();
        assert!((0..1000).all(|_| b.draw(&mut rng) <= 1));
        let m = MeasureSpec::custom(2, vec![0.9, 0.1]).unwrap();
        assert!(m.sampler(md).is_err());
        let m = MeasureSpec::custom(2, vec![0.1, 0.2, 0.3, 0.1, 0.1, 0.1, 0.05, 0.05]).unwrap();
        let s = m.sampler(md).unwrap();
        assert!((0..1000).all(|_| s.draw(&mut rng) < 4));
    }

    #[test]
    fn haar_mean() {
        let md = Modulus::new(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = MeasureSpec::haar().sampler(md).unwrap();
        let n = 100_000;
        let ones: u64 = (0..n).map(|_| s.draw(&mut rng)).sum();
        let mean = ones as f64 / n as f64;
        assert!((mean - 0.5).abs() < 3.0 * 0.5 / (n as f64).sqrt());
    }
}
