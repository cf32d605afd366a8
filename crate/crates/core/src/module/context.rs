use crate::factor::FactorData;
use crate::ring::{Poly, RingError, RingSpec};

/// A ring `R` together with the factorization of `P mod p` and its Hensel
/// lifts at the same precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingContext {
    spec: RingSpec,
    factors: FactorData,
}

impl RingContext {
    pub fn new(spec: RingSpec) -> Self {
        let factors = FactorData::new(&spec);
        RingContext { spec, factors }
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn factors(&self) -> &FactorData {
        &self.factors
    }

    pub fn p(&self) -> u64 {
        self.spec.p()
    }

    pub fn k(&self) -> u32 {
        self.spec.k()
    }

    /// Number of distinct irreducible factors `l`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.squarefree
    }

    /// `d_j`.
    pub fn degree(&self, j: usize) -> usize {
        self.factors.factors[j].d
    }

    /// `m_j`.
    pub fn multiplicity(&self, j: usize) -> u32 {
        self.factors.factors[j].m
    }

    /// `q_j = p^(d_j)`.
    pub fn field_size(&self, j: usize) -> u64 {
        self.factors.factors[j].field_size(self.p())
    }

    /// The irreducible `P_j` over `F_p`, lifted with coefficients in `[0, p)`.
    pub fn residue_poly(&self, j: usize) -> &Poly {
        &self.factors.factors[j].poly
    }

    /// The Hensel lift `Q_j` over `Z/p^k`.
    pub fn lift(&self, j: usize) -> &Poly {
        &self.factors.lifts[j]
    }

    /// The same `P` (canonical lift) at precision `k`.
    pub fn with_exponent(&self, k: u32) -> Result<Self, RingError> {
        if k == self.k() {
            return Ok(self.clone());
        }
        Ok(RingContext::new(self.spec.with_exponent(k)?))
    }
}
