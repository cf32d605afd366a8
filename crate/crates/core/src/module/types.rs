//! Isomorphism types of cokernels and catalogs of candidate modules.
//!
//! When `P mod p` is square-free every component `R_j` is a DVR with
//! uniformizer `p`, so `G_j ≅ ⊕_i R_j/p^(λ_i)` and the type is a tuple of
//! partitions read off the Smith form of `Q_j(X)`. Otherwise types are
//! matched against an explicit catalog by size and `Hom`-count fingerprint.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::cokernel_r_generators;
use super::{
    count_hom, crt_component, FiniteModule, ModuleError, ModulePresentation, RingContext,
};
use crate::linalg::{snf_valuations, Matrix};

/// Parts in weakly decreasing order.
pub type Partition = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModuleType {
    /// `⊕_j ⊕_i R_j / p^(λ^(j)_i)` (square-free case).
    Partitions(Vec<Partition>),
    /// A named entry of an explicit catalog.
    Named(String),
    /// Not matched to any catalog entry.
    Unclassified { log_size: u64 },
}

impl ModuleType {
    /// Stable textual id: `"(2,1);()"` for partitions, the entry name for
    /// catalog modules, `"other"` otherwise.
    pub fn id(&self) -> String {
        match self {
            ModuleType::Partitions(parts) => partitions_id(parts),
            ModuleType::Named(name) => name.clone(),
            ModuleType::Unclassified { .. } => "other".into(),
        }
    }
}

fn partitions_id(parts: &[Partition]) -> String {
    let mut s = String::new();
    for (j, lambda) in parts.iter().enumerate() {
        if j > 0 {
            s.push(';');
        }
        s.push('(');
        for (i, x) in lambda.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            write!(s, "{x}").expect("writing to a String");
        }
        s.push(')');
    }
    s
}

/// The type of one sampled cokernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeOutcome {
    pub module_type: ModuleType,
    /// `log_p |cok(P(X))|` at the working precision.
    pub log_size: u64,
    /// Some Smith valuation reached `k`, so the type over `Z_p` is not
    /// determined at this precision.
    pub saturated: bool,
    /// Number of (factor, valuation) pairs whose multiplicity is not a
    /// multiple of `d_j`; always zero for a correct factorization.
    pub violations: u32,
}

/// All partitions with `|λ| <= max_weight` and parts `<= max_part`, each in
/// weakly decreasing order.
pub fn partitions_up_to(max_weight: u64, max_part: u32) -> Vec<Partition> {
    fn rec(rem: u64, cap: u32, cur: &mut Partition, out: &mut Vec<Partition>) {
        out.push(cur.clone());
        for x in (1..=cap.min(rem as u32)).rev() {
            cur.push(x);
            rec(rem - x as u64, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_weight, max_part, &mut Vec::new(), &mut out);
    out
}

/// `⊕_j ⊕_i Z/p^(λ^(j)_i)[t]/(Q_j)`.
pub fn module_from_partitions(
    ctx: &RingContext,
    parts: &[Partition],
) -> Result<FiniteModule, ModuleError> {
    if parts.len() != ctx.len() {
        return Err(ModuleError::Invalid(format!(
            "expected {} partitions, got {}",
            ctx.len(),
            parts.len()
        )));
    }
    let mut g = FiniteModule::zero(ctx.spec().clone());
    for (j, lambda) in parts.iter().enumerate() {
        for &e in lambda {
            let c = FiniteModule::cyclic(ctx.spec().clone(), ctx.lift(j), e)?;
            g = g.direct_sum(&c)?;
        }
    }
    Ok(g)
}

/// Turns per-valuation counts into a partition, counting multiplicities
/// that are not divisible by `d`.
fn partition_from_counts(counts: &BTreeMap<u32, u64>, d: usize, violations: &mut u32) -> Partition {
    let mut lambda = Vec::new();
    for (&v, &c) in counts.iter().rev() {
        if c % d as u64 != 0 {
            *violations += 1;
        }
        lambda.extend(std::iter::repeat_n(v, (c / d as u64) as usize));
    }
    lambda
}

/// Type of a module in standard form (square-free case only).
pub fn module_type_of(g: &FiniteModule, ctx: &RingContext) -> Result<ModuleType, ModuleError> {
    if !ctx.is_squarefree() {
        return Err(ModuleError::NotSquarefree);
    }
    let mut parts = Vec::with_capacity(ctx.len());
    for j in 0..ctx.len() {
        let gj = crt_component(ctx, g, j)?;
        let mut counts = BTreeMap::new();
        for &e in gj.exps() {
            *counts.entry(e).or_insert(0u64) += 1;
        }
        let mut violations = 0;
        parts.push(partition_from_counts(&counts, ctx.degree(j), &mut violations));
        if violations > 0 {
            return Err(ModuleError::Internal(format!(
                "component {j} has exponent multiplicities not divisible by d_j"
            )));
        }
    }
    Ok(ModuleType::Partitions(parts))
}

/// Type of `cok(P(X))` for `X` over `Z/p^k`. Square-free rings are typed
/// from Smith valuations of each `Q_j(X)`; otherwise `catalog` is required.
pub fn module_type(
    x: &Matrix,
    ctx: &RingContext,
    catalog: Option<&ModuleCatalog>,
) -> Result<TypeOutcome, ModuleError> {
    if x.modulus() != ctx.spec().modulus() {
        return Err(ModuleError::RingMismatch);
    }
    let k = ctx.k();
    if ctx.is_squarefree() {
        let mut parts = Vec::with_capacity(ctx.len());
        let mut violations = 0;
        let mut saturated = false;
        let mut log_size = 0u64;
        for j in 0..ctx.len() {
            let vals = snf_valuations(ctx.lift(j).eval_matrix(x));
            let mut counts = BTreeMap::new();
            for v in vals.into_iter().filter(|&v| v > 0) {
                saturated |= v >= k;
                log_size += v as u64;
                *counts.entry(v).or_insert(0u64) += 1;
            }
            parts.push(partition_from_counts(&counts, ctx.degree(j), &mut violations));
        }
        return Ok(TypeOutcome {
            module_type: ModuleType::Partitions(parts),
            log_size,
            saturated,
            violations,
        });
    }
    let catalog = catalog.ok_or(ModuleError::NotSquarefree)?;
    let vals = snf_valuations(ctx.spec().poly().eval_matrix(x));
    let log_size: u64 = vals.iter().map(|&v| v as u64).sum();
    let saturated = vals.iter().any(|&v| v >= k);
    let mut outcome = TypeOutcome {
        module_type: ModuleType::Unclassified { log_size },
        log_size,
        saturated,
        violations: 0,
    };
    if log_size == 0 {
        if let Some(e) = catalog.entries.iter().find(|e| e.log_size == 0) {
            outcome.module_type = e.module_type.clone();
        }
    } else if !saturated && catalog.has_size(log_size) {
        let pres = cokernel_r_generators(x, ctx.spec());
        if let Some(t) = catalog.match_presentation(&pres, log_size)? {
            outcome.module_type = t;
        }
    }
    Ok(outcome)
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub module_type: ModuleType,
    pub log_size: u64,
    pub module: FiniteModule,
}

/// A finite list of module types in canonical order. In the square-free
/// case it is the complete list of types up to a size bound; otherwise it
/// consists of the zero module, the residue fields and user modules,
/// distinguished by `Hom`-count fingerprints.
#[derive(Clone, Debug)]
pub struct ModuleCatalog {
    entries: Vec<CatalogEntry>,
    index: HashMap<ModuleType, usize>,
    max_log_size: Option<u64>,
    /// Test modules for fingerprints (explicit catalogs only).
    tests: Vec<FiniteModule>,
    fingerprints: Vec<Vec<u64>>,
}

/// All tuples of partitions with `Σ_j d_j |λ^(j)| <= log_p B` and parts
/// `<= k`, ordered by size and then in decreasing lexicographic order.
pub fn enumerate_catalog(ctx: &RingContext, max_size: u64) -> Result<ModuleCatalog, ModuleError> {
    if !ctx.is_squarefree() {
        return Err(ModuleError::NotSquarefree);
    }
    if max_size == 0 {
        return Err(ModuleError::Invalid("size bound must be at least 1".into()));
    }
    let p = ctx.p();
    let mut w = 0u64;
    let mut size = 1u64;
    while let Some(next) = size.checked_mul(p).filter(|&s| s <= max_size) {
        size = next;
        w += 1;
    }
    let per_factor: Vec<Vec<Partition>> = (0..ctx.len())
        .map(|j| partitions_up_to(w / ctx.degree(j) as u64, ctx.k()))
        .collect();
    let mut tuples: Vec<(u64, Vec<Partition>)> = vec![(0, Vec::new())];
    for (j, options) in per_factor.iter().enumerate() {
        let d = ctx.degree(j) as u64;
        let mut next = Vec::new();
        for (weight, tuple) in &tuples {
            for lambda in options {
                let wl = weight + d * lambda.iter().map(|&x| x as u64).sum::<u64>();
                if wl <= w {
                    let mut t = tuple.clone();
                    t.push(lambda.clone());
                    next.push((wl, t));
                }
            }
        }
        tuples = next;
    }
    tuples.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
    let mut entries = Vec::with_capacity(tuples.len());
    for (log_size, parts) in tuples {
        let module = module_from_partitions(ctx, &parts)?;
        let module_type = ModuleType::Partitions(parts);
        entries.push(CatalogEntry {
            id: module_type.id(),
            module_type,
            log_size,
            module,
        });
    }
    Ok(ModuleCatalog::assemble(entries, Some(w), Vec::new(), Vec::new()))
}

impl ModuleCatalog {
    fn assemble(
        entries: Vec<CatalogEntry>,
        max_log_size: Option<u64>,
        tests: Vec<FiniteModule>,
        fingerprints: Vec<Vec<u64>>,
    ) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.module_type.clone(), i))
            .collect();
        ModuleCatalog {
            entries,
            index,
            max_log_size,
            tests,
            fingerprints,
        }
    }

    /// Explicit catalog: the zero module, the residue fields `F_(q_j)`, then
    /// the given named modules. Fails if two entries of the same size have
    /// equal fingerprints.
    pub fn from_modules(
        ctx: &RingContext,
        modules: Vec<(String, FiniteModule)>,
    ) -> Result<Self, ModuleError> {
        let spec = ctx.spec();
        let mut named = vec![("0".to_string(), FiniteModule::zero(spec.clone()))];
        for j in 0..ctx.len() {
            let q = ctx.field_size(j);
            let id = if ctx.len() == 1 {
                format!("F_{q}")
            } else {
                format!("F_{q}#{j}")
            };
            named.push((id, FiniteModule::cyclic(spec.clone(), ctx.residue_poly(j), 1)?));
        }
        for (id, g) in modules {
            if g.spec() != spec {
                return Err(ModuleError::RingMismatch);
            }
            if named.iter().any(|(other, _)| *other == id) || id == "other" {
                return Err(ModuleError::Invalid(format!("duplicate module id {id}")));
            }
            named.push((id, g));
        }
        let tests: Vec<FiniteModule> = named
            .iter()
            .map(|(_, g)| g.clone())
            .filter(|g| !g.is_zero())
            .collect();
        let mut fingerprints = Vec::with_capacity(named.len());
        for (_, g) in &named {
            let pres = ModulePresentation::from_basis(g);
            fingerprints.push(fingerprint(&pres, &tests)?);
        }
        for a in 0..named.len() {
            for b in 0..a {
                if named[a].1.log_size() == named[b].1.log_size() && fingerprints[a] == fingerprints[b]
                {
                    return Err(ModuleError::Invalid(format!(
                        "modules {} and {} are not distinguished by Hom counts",
                        named[b].0, named[a].0
                    )));
                }
            }
        }
        let entries = named
            .into_iter()
            .map(|(id, module)| CatalogEntry {
                module_type: ModuleType::Named(id.clone()),
                id,
                log_size: module.log_size(),
                module,
            })
            .collect();
        Ok(ModuleCatalog::assemble(entries, None, tests, fingerprints))
    }

    /// The same catalog over `ctx`, which must be `P` at a precision no
    /// smaller than any module exponent; explicit catalogs are
    /// re-fingerprinted there.
    pub fn with_exponent(&self, ctx: &RingContext) -> Result<Self, ModuleError> {
        let lift = |g: &FiniteModule| g.with_exponent(ctx.k());
        if self.fingerprints.is_empty() {
            let entries = self
                .entries
                .iter()
                .map(|e| {
                    Ok(CatalogEntry {
                        module: lift(&e.module)?,
                        ..e.clone()
                    })
                })
                .collect::<Result<Vec<_>, ModuleError>>()?;
            return Ok(ModuleCatalog::assemble(entries, self.max_log_size, Vec::new(), Vec::new()));
        }
        let user = self.entries[1 + ctx.len()..]
            .iter()
            .map(|e| Ok((e.id.clone(), lift(&e.module)?)))
            .collect::<Result<Vec<_>, ModuleError>>()?;
        ModuleCatalog::from_modules(ctx, user)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `log_p B` for enumerated catalogs.
    pub fn max_log_size(&self) -> Option<u64> {
        self.max_log_size
    }

    pub fn position(&self, t: &ModuleType) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn find_id(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    fn has_size(&self, log_size: u64) -> bool {
        self.entries.iter().any(|e| e.log_size == log_size)
    }

    /// Matches a presented module of known size against the explicit
    /// entries of that size.
    fn match_presentation(
        &self,
        pres: &ModulePresentation,
        log_size: u64,
    ) -> Result<Option<ModuleType>, ModuleError> {
        let candidates: Vec<usize> = (0..self.entries.len())
            .filter(|&i| self.entries[i].log_size == log_size)
            .collect();
        if candidates.is_empty() {
            return Ok(None);
        }
        if self.fingerprints.is_empty() {
            return Err(ModuleError::Internal("catalog has no fingerprints".into()));
        }
        let fp = fingerprint(pres, &self.tests)?;
        Ok(candidates
            .into_iter()
            .find(|&i| self.fingerprints[i] == fp)
            .map(|i| self.entries[i].module_type.clone()))
    }

    /// Type of a module in standard form relative to this catalog.
    pub fn classify(&self, ctx: &RingContext, g: &FiniteModule) -> Result<ModuleType, ModuleError> {
        if ctx.is_squarefree() && self.fingerprints.is_empty() {
            return module_type_of(g, ctx);
        }
        let pres = ModulePresentation::from_basis(g);
        Ok(self
            .match_presentation(&pres, g.log_size())?
            .unwrap_or(ModuleType::Unclassified {
                log_size: g.log_size(),
            }))
    }
}

fn fingerprint(pres: &ModulePresentation, tests: &[FiniteModule]) -> Result<Vec<u64>, ModuleError> {
    tests.iter().map(|h| count_hom(pres, h)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Modulus, Poly, RingSpec};

    fn ctx(p: u64, k: u32, c: &[u64]) -> RingContext {
        RingContext::new(RingSpec::new(Modulus::new(p, k).unwrap(), Poly::from(c.to_vec())).unwrap())
    }

    fn ids(c: &ModuleCatalog) -> Vec<String> {
        c.entries().iter().map(|e| e.id.clone()).collect()
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions_up_to(0, 3), vec![Vec::<u32>::new()]);
        assert_eq!(partitions_up_to(3, 3).len(), 7);
        assert_eq!(partitions_up_to(4, 2).len(), 9);
    }

    #[test]
    fn catalog_examples() {
        assert_eq!(ids(&enumerate_catalog(&ctx(2, 2, &[0, 1]), 4).unwrap()), ["()", "(1)", "(2)", "(1,1)"]);
        assert_eq!(
            ids(&enumerate_catalog(&ctx(2, 2, &[1, 1, 1]), 16).unwrap()),
            ["()", "(1)", "(2)", "(1,1)"]
        );
        assert_eq!(ids(&enumerate_catalog(&ctx(2, 2, &[0, 1]), 1).unwrap()), ["()"]);
        assert_eq!(
            ids(&enumerate_catalog(&ctx(2, 1, &[0, 1, 1]), 2).unwrap()),
            ["();()", "(1);()", "();(1)"]
        );
        assert_eq!(
            enumerate_catalog(&ctx(2, 2, &[0, 0, 1]), 4).unwrap_err(),
            ModuleError::NotSquarefree
        );
    }

    #[test]
    fn matrix_types() {
        let c = ctx(2, 1, &[0, 1]);
        let md = *c.spec().modulus();
        let t = module_type(&Matrix::identity(md, 3), &c, None).unwrap();
        assert_eq!(t.module_type.id(), "()");
        assert!(!t.saturated);
        let c = ctx(2, 2, &[0, 1]);
        let md = *c.spec().modulus();
        let t = module_type(&Matrix::zeros(md, 2, 2), &c, None).unwrap();
        assert_eq!(t.module_type.id(), "(2,2)");
        assert!(t.saturated);
    }

    #[test]
    fn quadratic_valuations_come_in_pairs() {
        let c = ctx(2, 1, &[1, 1, 1]);
        let md = *c.spec().modulus();
        for bits in 0..16u64 {
            let x = Matrix::from_fn(md, 2, 2, |i, j| (bits >> (2 * i + j)) & 1);
            let t = module_type(&x, &c, None).unwrap();
            assert_eq!(t.violations, 0);
            assert_eq!(t.log_size % 2, 0);
        }
    }

    #[test]
    fn catalog_modules_type_back() {
        let c = ctx(3, 2, &[0, 1, 1]);
        let cat = enumerate_catalog(&c, 81).unwrap();
        for e in cat.entries() {
            assert_eq!(module_type_of(&e.module, &c).unwrap(), e.module_type);
            assert_eq!(e.module.log_size(), e.log_size);
            assert_eq!(cat.classify(&c, &e.module).unwrap(), e.module_type);
        }
    }

    #[test]
    fn explicit_catalog_for_t_squared() {
        let c = ctx(2, 2, &[0, 0, 1]);
        let s = c.spec().clone();
        let r1 = FiniteModule::cyclic(s.clone(), &Poly::monomial(2), 1).unwrap();
        let z4 = FiniteModule::cyclic(s.clone(), &Poly::x(), 2).unwrap();
        let cat = ModuleCatalog::from_modules(
            &c,
            vec![("F2[t]/(t^2)".into(), r1.clone()), ("Z/4".into(), z4.clone())],
        )
        .unwrap();
        assert_eq!(ids(&cat), ["0", "F_2", "F2[t]/(t^2)", "Z/4"]);
        assert_eq!(cat.classify(&c, &z4).unwrap(), ModuleType::Named("Z/4".into()));
        let md = *s.modulus();
        // X^2 = 0 over Z/4: cok(X^2) = (Z/4)^2 is saturated at k = 2.
        let x = Matrix::from_rows(md, &[vec![0, 1], vec![0, 0]]).unwrap();
        assert!(module_type(&x, &c, Some(&cat)).unwrap().saturated);
        // X^2 = 2I: cok is (Z/2)^2 with t e_1 = e_2, t e_2 = 0, i.e. F_2[t]/(t^2).
        let x = Matrix::from_rows(md, &[vec![0, 2], vec![1, 0]]).unwrap();
        let out = module_type(&x, &c, Some(&cat)).unwrap();
        assert_eq!(out.module_type.id(), "F2[t]/(t^2)");
        let out = module_type(&Matrix::identity(md, 2), &c, Some(&cat)).unwrap();
        assert_eq!(out.module_type.id(), "0");
        // Duplicates are rejected.
        assert!(ModuleCatalog::from_modules(&c, vec![("dup".into(), r1.direct_sum(&FiniteModule::zero(s)).unwrap()), ("r".into(), r1)]).is_err());
    }
}
