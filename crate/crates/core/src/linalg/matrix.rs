use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::LinalgError;
use crate::ring::{Modulus, Poly};

/// Dense row-major matrix over `Z/p^kZ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix mod {} ({}x{})", self.modulus.order(), self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = u64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &u64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        Matrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Matrix::zeros(modulus, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Entries are reduced mod `p^k`.
    pub fn from_vec(
        modulus: Modulus,
        rows: usize,
        cols: usize,
        data: Vec<u64>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        let data = data.into_iter().map(|x| modulus.reduce(x)).collect();
        Ok(Matrix {
            modulus,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(modulus: Modulus, rows: &[Vec<u64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Ragged);
        }
        Matrix::from_vec(modulus, r, c, rows.concat())
    }

    pub fn from_fn(
        modulus: Modulus,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(modulus.reduce(f(r, c)));
            }
        }
        Matrix {
            modulus,
            rows,
            cols,
            data,
        }
    }

    #[inline]
    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Row `t` shared and row `r` mutable, for `t < r`.
    #[inline]
    pub fn row_pair_mut(&mut self, t: usize, r: usize) -> (&[u64], &mut [u64]) {
        assert!(t < r);
        let cols = self.cols;
        let (head, tail) = self.data.split_at_mut(r * cols);
        (&head[t * cols..(t + 1) * cols], &mut tail[..cols])
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.modulus, self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let m = self.modulus;
        Matrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| m.add(a, b))
                .collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let m = self.modulus;
        Matrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| m.sub(a, b))
                .collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let m = self.modulus;
        Matrix {
            data: self.data.iter().map(|&a| m.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    /// Adds `c` on the diagonal.
    pub fn add_scalar(&self, c: u64) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] = self.modulus.add(out[(i, i)], c);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let m = self.modulus;
        let mut out = Matrix::zeros(m, self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (o, &b) in orow.iter_mut().zip(other.row(l)) {
                    *o = m.add(*o, m.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let m = self.modulus;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| m.add(acc, m.mul(a, b)))
            })
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let m = self.modulus;
        Matrix::from_fn(
            m,
            self.rows * other.rows,
            self.cols * other.cols,
            |r, c| {
                m.mul(
                    self[(r / other.rows, c / other.cols)],
                    other[(r % other.rows, c % other.cols)],
                )
            },
        )
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.modulus, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)]
            } else {
                other[(r, c - self.cols)]
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            modulus: self.modulus,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// The same integer entries read modulo another power of `p` (reduction,
    /// or canonical lift when the target exponent is larger).
    pub fn change_modulus(&self, to: Modulus) -> Matrix {
        assert_eq!(to.p(), self.modulus.p());
        Matrix {
            modulus: to,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| to.reduce(x)).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|&x| x as i64).collect(),
        }
    }

    /// Determinant by fraction-free elimination with minimal-valuation pivots.
    pub fn det(&self) -> u64 {
        assert!(self.is_square());
        let m = self.modulus;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1u64;
        for t in 0..n {
            let Some((pr, pc)) = (t..n)
                .flat_map(|r| (t..n).map(move |c| (r, c)))
                .filter(|&(r, c)| a[(r, c)] != 0)
                .min_by_key(|&(r, c)| m.valuation(a[(r, c)]))
            else {
                return 0;
            };
            if pr != t {
                a.swap_rows(pr, t);
                det = m.neg(det);
            }
            if pc != t {
                a.swap_cols(pc, t);
                det = m.neg(det);
            }
            let pivot = a[(t, t)];
            det = m.mul(det, pivot);
            for r in t + 1..n {
                let Some(f) = m.div_exact(a[(r, t)], pivot) else {
                    unreachable!("pivot has minimal valuation")
                };
                if f == 0 {
                    continue;
                }
                for c in t..n {
                    let v = a[(t, c)];
                    a[(r, c)] = m.sub_mul(a[(r, c)], f, v);
                }
            }
        }
        det
    }
}

/// Matrix file format: `{"rows": n, "cols": n, "entries": [row-major integers]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl MatrixJson {
    pub fn to_matrix(&self, modulus: Modulus) -> Result<Matrix, LinalgError> {
        if self.entries.len() != self.rows * self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: self.entries.len(),
            });
        }
        let data = self.entries.iter().map(|&x| modulus.reduce_i64(x)).collect();
        Matrix::from_vec(modulus, self.rows, self.cols, data)
    }
}

impl Poly {
    /// `P(X)` by Horner's rule.
    pub fn eval_matrix(&self, x: &Matrix) -> Matrix {
        assert!(x.is_square(), "P(X) needs a square matrix");
        let m = *x.modulus();
        let n = x.rows();
        let mut acc = Matrix::zeros(m, n, n);
        for &c in self.coeffs().iter().rev() {
            acc = acc.mul(x).add_scalar(m.reduce(c));
        }
        acc
    }
}
