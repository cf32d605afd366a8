//! Finite `R`-modules in standard form `G = ⊕ Z/p^(e_i)` with an explicit
//! `t`-action.

use serde::{Deserialize, Serialize};

use super::ModuleError;
use crate::linalg::{howell_form, smith_normal_form, HowellResult, Matrix};
use crate::ring::{Modulus, Poly, RingSpec};

/// `G = ⊕_i Z/p^(e_i)` with `t` acting by the matrix `T` on column vectors:
/// column `r` of `T` holds the coordinates of `t * e_r`.
///
/// Elements are represented by lifts in `(Z/p^k)^m`; the lifts of zero form
/// the lattice `L = ⊕ p^(e_i) Z/p^k`, which `T` preserves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    spec: RingSpec,
    exps: Vec<u32>,
    t: Matrix,
}

/// Module file format: `{"abelian": [e_1, ..., e_m], "t_action": [[..], ..]}`
/// meaning `⊕ Z/p^(e_i)` with `t_action[i][r]` the `e_i`-coordinate of `t e_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub abelian: Vec<u32>,
    pub t_action: Vec<Vec<i64>>,
}

impl FiniteModule {
    /// Validates that `T` is well defined on `G` and that `P(T) = 0` on `G`.
    pub fn new(spec: RingSpec, exps: Vec<u32>, t: Matrix) -> Result<Self, ModuleError> {
        let m = exps.len();
        let k = spec.k();
        if t.rows() != m || t.cols() != m {
            return Err(ModuleError::Invalid(format!(
                "t-action must be {m}x{m}, got {}x{}",
                t.rows(),
                t.cols()
            )));
        }
        if t.modulus() != spec.modulus() {
            return Err(ModuleError::RingMismatch);
        }
        if let Some(&e) = exps.iter().find(|&&e| e == 0 || e > k) {
            return Err(ModuleError::Invalid(format!(
                "cyclic exponent {e} outside 1..={k}"
            )));
        }
        let md = *spec.modulus();
        for r in 0..m {
            for i in 0..m {
                // p^(e_r) e_r = 0 forces p^(e_r) T_ir ≡ 0 mod p^(e_i).
                if md.valuation(t[(i, r)]) + exps[r] < exps[i] {
                    return Err(ModuleError::Invalid(format!(
                        "t-action is not well defined: entry ({i},{r})"
                    )));
                }
            }
        }
        let t = reduce_rows(t, &exps);
        let g = FiniteModule { spec, exps, t };
        let pt = g.spec.poly().eval_matrix(&g.t);
        if !(0..m).all(|r| g.is_zero_column(&pt, r)) {
            return Err(ModuleError::NotAnnihilated);
        }
        Ok(g)
    }

    pub fn zero(spec: RingSpec) -> Self {
        let md = *spec.modulus();
        FiniteModule {
            spec,
            exps: Vec::new(),
            t: Matrix::zeros(md, 0, 0),
        }
    }

    pub fn from_json(spec: RingSpec, json: &ModuleJson) -> Result<Self, ModuleError> {
        let m = json.abelian.len();
        if json.t_action.len() != m || json.t_action.iter().any(|r| r.len() != m) {
            return Err(ModuleError::Invalid(format!(
                "t_action must be a {m}x{m} matrix"
            )));
        }
        let md = *spec.modulus();
        let t = Matrix::from_fn(md, m, m, |i, j| md.reduce_i64(json.t_action[i][j]));
        FiniteModule::new(spec, json.abelian.clone(), t)
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            abelian: self.exps.clone(),
            t_action: self
                .t
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x as i64).collect())
                .collect(),
        }
    }

    /// `Z/p^e[t]/(Q)` for monic `Q` dividing `P` modulo `p^e`.
    pub fn cyclic(spec: RingSpec, q: &Poly, e: u32) -> Result<Self, ModuleError> {
        let md = *spec.modulus();
        let d = q.deg().ok_or_else(|| ModuleError::Invalid("zero polynomial".into()))?;
        let c = crate::ring::RingSpec::new(md, q.clone())?.companion_matrix();
        FiniteModule::new(spec, vec![e; d], c)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn modulus(&self) -> &Modulus {
        self.spec.modulus()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn t_action(&self) -> &Matrix {
        &self.t
    }

    /// Number of cyclic summands `m`.
    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    /// `log_p |G|`.
    pub fn log_size(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    /// Smallest `e` with `p^e G = 0`.
    pub fn exponent(&self) -> u32 {
        self.exps.iter().copied().max().unwrap_or(0)
    }

    /// Abelian type as a partition (descending exponents).
    pub fn abelian_type(&self) -> Vec<u32> {
        let mut e = self.exps.clone();
        e.sort_unstable_by(|a, b| b.cmp(a));
        e
    }

    /// The same module over `P` at precision `k` (which must be at least the exponent).
    pub fn with_exponent(&self, k: u32) -> Result<Self, ModuleError> {
        if k == self.spec.k() {
            return Ok(self.clone());
        }
        if k < self.exponent() {
            return Err(ModuleError::KViolation {
                k,
                e: self.exponent(),
            });
        }
        let spec = self.spec.with_exponent(k)?;
        let t = self.t.change_modulus(*spec.modulus());
        FiniteModule::new(spec, self.exps.clone(), t)
    }

    /// Rows `p^(e_i) e_i` generating the lattice `L` of lifts of zero.
    pub fn lattice(&self) -> Matrix {
        let md = *self.modulus();
        let m = self.rank();
        Matrix::from_fn(md, m, m, |i, j| if i == j { md.ppow(self.exps[i]) } else { 0 })
    }

    /// Whether column `r` of `a` lies in `L`.
    pub(crate) fn is_zero_column(&self, a: &Matrix, r: usize) -> bool {
        let md = self.modulus();
        (0..self.rank()).all(|i| md.valuation(a[(i, r)]) >= self.exps[i])
    }

    /// Whether the lifted vector `x` represents zero.
    pub fn is_zero_element(&self, x: &[u64]) -> bool {
        let md = self.modulus();
        x.iter()
            .zip(&self.exps)
            .all(|(&c, &e)| md.valuation(c) >= e)
    }

    /// Canonical representative: coordinate `i` reduced into `[0, p^(e_i))`.
    pub fn canonical(&self, x: &[u64]) -> Vec<u64> {
        let md = self.modulus();
        x.iter()
            .zip(&self.exps)
            .map(|(&c, &e)| c % md.ppow(e))
            .collect()
    }

    /// All elements in canonical form, in mixed-radix order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let md = *self.modulus();
        let radices: Vec<u64> = self.exps.iter().map(|&e| md.p().pow(e)).collect();
        let total: u64 = radices.iter().product();
        (0..total).map(move |mut idx| {
            radices
                .iter()
                .map(|&r| {
                    let x = idx % r;
                    idx /= r;
                    x
                })
                .collect()
        })
    }

    /// `T^a x` for `a = 0..count` as rows.
    pub(crate) fn orbit_rows(&self, x: &[u64], count: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(count);
        let mut cur = x.to_vec();
        for _ in 0..count {
            let next = self.t.mul_vec(&cur);
            out.push(cur);
            cur = next;
        }
        out
    }

    /// Howell key of the `R`-submodule generated by `gens`, plus `L`.
    /// Two generating sets give equal keys iff they generate the same submodule.
    pub fn span_key(&self, gens: &[Vec<u64>]) -> HowellResult {
        let d = self.spec.degree();
        let mut rows: Vec<Vec<u64>> = gens.iter().flat_map(|g| self.orbit_rows(g, d)).collect();
        rows.extend(self.lattice().to_rows());
        let md = *self.modulus();
        let m = Matrix::from_rows(md, &rows).unwrap_or_else(|_| Matrix::zeros(md, 0, self.rank()));
        howell_form(&m)
    }

    /// `log_p` of the size of the submodule with the given key.
    pub fn key_log_size(&self, key: &HowellResult) -> u64 {
        let k = self.spec.k() as u64;
        let lattice: u64 = self.exps.iter().map(|&e| k - e as u64).sum();
        key.span_log_size() - lattice
    }

    /// `G / N` where `N` is the `R`-submodule generated by `gens`.
    pub fn quotient(&self, gens: &[Vec<u64>]) -> FiniteModule {
        let md = *self.modulus();
        let d = self.spec.degree();
        let m = self.rank();
        let mut cols: Vec<Vec<u64>> = self.lattice().to_rows();
        cols.extend(gens.iter().flat_map(|g| self.orbit_rows(g, d)));
        let rel = Matrix::from_rows(md, &cols)
            .map(|r| r.transpose())
            .unwrap_or_else(|_| Matrix::zeros(md, m, 0));
        FiniteModule::from_relations(self.spec.clone(), &rel, &self.t)
            .expect("quotient of a valid module is valid")
    }

    /// The module `(Z/p^k)^N / colspan(rel)` with `t` acting by `t` (which
    /// must preserve the column span), brought to standard form via Smith
    /// normal form: with `U rel V = D`, new coordinates are `y = U x` and
    /// `t` becomes `U t U^-1` restricted to coordinates with nonzero exponent.
    pub fn from_relations(spec: RingSpec, rel: &Matrix, t: &Matrix) -> Result<Self, ModuleError> {
        let md = *spec.modulus();
        let n = rel.rows();
        let k = md.k();
        if rel.cols() == 0 {
            return FiniteModule::new(spec, vec![k; n], t.clone());
        }
        let snf = smith_normal_form(rel, true);
        let mut exps: Vec<u32> = snf.valuations().to_vec();
        exps.resize(n, k);
        let tr = snf.into_transforms().expect("requested");
        let keep: Vec<usize> = (0..n).filter(|&i| exps[i] > 0).collect();
        let conj = tr.u.mul(t).mul(&tr.u_inv);
        let t_new = Matrix::from_fn(md, keep.len(), keep.len(), |i, j| conj[(keep[i], keep[j])]);
        let exps: Vec<u32> = keep.iter().map(|&i| exps[i]).collect();
        FiniteModule::new(spec, exps, t_new)
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &FiniteModule) -> Result<Self, ModuleError> {
        if self.spec != other.spec {
            return Err(ModuleError::RingMismatch);
        }
        let (a, b) = (self.rank(), other.rank());
        let md = *self.modulus();
        let t = Matrix::from_fn(md, a + b, a + b, |i, j| {
            if i < a && j < a {
                self.t[(i, j)]
            } else if i >= a && j >= a {
                other.t[(i - a, j - a)]
            } else {
                0
            }
        });
        let mut exps = self.exps.clone();
        exps.extend(&other.exps);
        FiniteModule::new(self.spec.clone(), exps, t)
    }
}

/// Reduces row `i` of `t` modulo `p^(e_i)` so equal modules compare equal.
fn reduce_rows(mut t: Matrix, exps: &[u32]) -> Matrix {
    let md = *t.modulus();
    for (i, &e) in exps.iter().enumerate() {
        if e < md.k() {
            let pe = md.ppow(e);
            for j in 0..t.cols() {
                t[(i, j)] %= pe;
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u64, k: u32, c: &[u64]) -> RingSpec {
        RingSpec::new(Modulus::new(p, k).unwrap(), Poly::from(c.to_vec())).unwrap()
    }

    #[test]
    fn validation() {
        let s = spec(2, 3, &[0, 1]);
        let md = *s.modulus();
        // Z/2 with t = 0 is fine; t = 1 violates P(t) = t = 0.
        assert!(FiniteModule::new(s.clone(), vec![1], Matrix::zeros(md, 1, 1)).is_ok());
        assert_eq!(
            FiniteModule::new(s.clone(), vec![1], Matrix::identity(md, 1)),
            Err(ModuleError::NotAnnihilated)
        );
        // Z/2 ⊕ Z/4 with t e_1 = e_2 is not well defined (2 e_1 = 0 but 2 e_2 != 0).
        let s2 = spec(2, 3, &[0, 0, 1]);
        let t = Matrix::from_rows(md, &[vec![0, 0], vec![1, 0]]).unwrap();
        assert!(matches!(
            FiniteModule::new(s2.clone(), vec![1, 2], t),
            Err(ModuleError::Invalid(_))
        ));
        let t = Matrix::from_rows(md, &[vec![0, 0], vec![2, 0]]).unwrap();
        assert!(FiniteModule::new(s2, vec![1, 2], t).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let s = spec(2, 2, &[1, 1, 1]);
        let j = ModuleJson {
            abelian: vec![1, 1],
            t_action: vec![vec![0, 1], vec![1, 1]],
        };
        let g = FiniteModule::from_json(s, &j).unwrap();
        assert_eq!(g.to_json(), j);
        assert_eq!(g.log_size(), 2);
    }

    #[test]
    fn quotient_and_relations() {
        // Z/4[t]/(t^2) modulo the submodule generated by t.
        let s = spec(2, 3, &[0, 0, 1]);
        let g = FiniteModule::cyclic(s.clone(), &Poly::monomial(2), 2).unwrap();
        assert_eq!(g.log_size(), 4);
        let q = g.quotient(&[vec![0, 1]]);
        assert_eq!(q.exps(), &[2]);
        assert!(q.t_action().is_zero());
        let q = g.quotient(&[vec![2, 0]]);
        assert_eq!(q.abelian_type(), vec![1, 1]);
    }
}
