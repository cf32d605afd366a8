//! `R`-module presentations `R^n / N`, written over `Z/p^k` by restriction
//! of scalars: coordinate `i*d + a` of `R^n` is the coefficient of `t^a` in
//! the `i`-th component.

use super::{FiniteModule, ModuleError};
use crate::linalg::{kernel_basis, Matrix};
use crate::ring::{RElement, RingSpec};

/// `R^ngens / N`, where `N` is the `R`-submodule generated by the columns
/// of `relations` (a `(d * ngens) x r` matrix over `Z/p^k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    spec: RingSpec,
    ngens: usize,
    relations: Matrix,
}

impl ModulePresentation {
    pub fn new(spec: RingSpec, ngens: usize, relations: Matrix) -> Result<Self, ModuleError> {
        let d = spec.degree();
        if relations.rows() != d * ngens {
            return Err(ModuleError::Linalg(crate::linalg::LinalgError::DimensionMismatch {
                expected: d * ngens,
                found: relations.rows(),
            }));
        }
        if relations.modulus() != spec.modulus() {
            return Err(ModuleError::RingMismatch);
        }
        Ok(ModulePresentation {
            spec,
            ngens,
            relations,
        })
    }

    /// Relations given as `R`-linear combinations `Σ_i c_i e_i`.
    pub fn from_r_relations(
        spec: RingSpec,
        ngens: usize,
        rels: &[Vec<RElement>],
    ) -> Result<Self, ModuleError> {
        let d = spec.degree();
        let md = *spec.modulus();
        let mut m = Matrix::zeros(md, d * ngens, rels.len());
        for (c, rel) in rels.iter().enumerate() {
            if rel.len() != ngens {
                return Err(ModuleError::Invalid("relation length differs from ngens".into()));
            }
            for (i, ci) in rel.iter().enumerate() {
                for (a, &x) in ci.coeffs().iter().enumerate() {
                    m[(i * d + a, c)] = x;
                }
            }
        }
        ModulePresentation::new(spec, ngens, m)
    }

    /// Presentation of `G` on the given generators (which must generate
    /// `G` as an `R`-module): the relations are all syzygies, i.e. the
    /// kernel of `R^s -> G`, `t^a e_i -> T^a g_i`.
    pub fn from_module(g: &FiniteModule, gens: &[Vec<u64>]) -> Self {
        let spec = g.spec().clone();
        let md = *spec.modulus();
        let d = spec.degree();
        let k = md.k();
        let s = gens.len();
        let m = g.rank();
        // Phi^T: row (i, a) is T^a g_i scaled so that L maps to zero.
        let rows: Vec<Vec<u64>> = gens.iter().flat_map(|x| g.orbit_rows(x, d)).collect();
        let mut phi_t = Matrix::zeros(md, s * d, m);
        for (r, row) in rows.iter().enumerate() {
            for (l, &x) in row.iter().enumerate() {
                phi_t[(r, l)] = md.mul(x, md.ppow(k - g.exps()[l]));
            }
        }
        let ker = kernel_basis(&phi_t);
        let relations = ker.form.transpose();
        ModulePresentation {
            spec,
            ngens: s,
            relations,
        }
    }

    /// Presentation of `G` on its standard basis.
    pub fn from_basis(g: &FiniteModule) -> Self {
        let m = g.rank();
        let gens: Vec<Vec<u64>> = (0..m)
            .map(|i| (0..m).map(|j| u64::from(i == j)).collect())
            .collect();
        ModulePresentation::from_module(g, &gens)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    /// `t`-action on `R^ngens` in the restriction-of-scalars coordinates.
    pub fn t_on_free(&self) -> Matrix {
        Matrix::identity(*self.spec.modulus(), self.ngens).kron(&self.spec.companion_matrix())
    }

    /// The presented module in standard form. The relation columns are
    /// closed under `t` first so that their span is the full submodule `N`.
    pub fn to_module(&self) -> FiniteModule {
        let d = self.spec.degree();
        let t = self.t_on_free();
        let mut blocks = vec![self.relations.clone()];
        for a in 1..d {
            let next = t.mul(&blocks[a - 1]);
            blocks.push(next);
        }
        let closed = blocks
            .iter()
            .skip(1)
            .fold(blocks[0].clone(), |acc, b| acc.hstack(b));
        FiniteModule::from_relations(self.spec.clone(), &closed, &t)
            .expect("a presentation defines a valid module")
    }
}

/// `cok(P(X)) ≅ cok_R(X - t I_n)`: the `dn x dn` matrix `X ⊗ I_d - I_n ⊗ C`
/// with `C` the companion matrix of `P`; column `j*d + a` is the image of
/// `t^a e_j`.
pub fn present_cokernel(x: &Matrix, spec: &RingSpec) -> ModulePresentation {
    assert!(x.is_square(), "X must be square");
    assert_eq!(x.modulus(), spec.modulus(), "X must live over Z/p^k of the ring");
    let md = *spec.modulus();
    let n = x.rows();
    let id = Matrix::identity(md, spec.degree());
    let rel = x
        .kron(&id)
        .sub(&Matrix::identity(md, n).kron(&spec.companion_matrix()));
    ModulePresentation {
        spec: spec.clone(),
        ngens: n,
        relations: rel,
    }
}

/// Only the `n` columns `(X - t) e_j` that generate the relations over `R`.
pub(crate) fn cokernel_r_generators(x: &Matrix, spec: &RingSpec) -> ModulePresentation {
    let md = *spec.modulus();
    let d = spec.degree();
    let n = x.rows();
    let tbar = spec.t();
    let mut rel = Matrix::zeros(md, d * n, n);
    for j in 0..n {
        for i in 0..n {
            rel[(i * d, j)] = x[(i, j)];
        }
        for (a, &c) in tbar.coeffs().iter().enumerate() {
            rel[(j * d + a, j)] = md.sub(rel[(j * d + a, j)], c);
        }
    }
    ModulePresentation {
        spec: spec.clone(),
        ngens: n,
        relations: rel,
    }
}
