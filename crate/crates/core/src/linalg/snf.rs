//! Smith normal form over the local ring `Z/p^kZ`.
//!
//! Every nonzero element is `unit * p^v`, so choosing the pivot of least
//! valuation in the active block makes all eliminations exact divisions.

use super::Matrix;

/// Diagonal data of `U * M * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    rows: usize,
    cols: usize,
    k: u32,
    /// `v_i` for `i < min(rows, cols)`, weakly increasing; `k` stands for a zero pivot.
    valuations: Vec<u32>,
    transforms: Option<SnfTransforms>,
}

/// Invertible `U` (rows x rows) and `V` (cols x cols), plus `U^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfTransforms {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
}

impl SnfResult {
    pub fn valuations(&self) -> &[u32] {
        &self.valuations
    }

    pub fn transforms(&self) -> Option<&SnfTransforms> {
        self.transforms.as_ref()
    }

    pub fn into_transforms(self) -> Option<SnfTransforms> {
        self.transforms
    }

    /// Exponents `e` (all `>= 1`, ascending) with `cok(M) = ⊕ Z/p^e`.
    ///
    /// Rows beyond the diagonal contribute free summands `Z/p^k`.
    pub fn cokernel_exponents(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self
            .valuations
            .iter()
            .copied()
            .filter(|&v| v > 0)
            .collect();
        e.extend(std::iter::repeat_n(self.k, self.rows.saturating_sub(self.cols)));
        e.sort_unstable();
        e
    }

    /// `log_p |cok(M)|`.
    pub fn cokernel_log_size(&self) -> u64 {
        self.cokernel_exponents().iter().map(|&e| e as u64).sum()
    }

    /// `log_p |im(M)|`.
    pub fn image_log_size(&self) -> u64 {
        self.valuations.iter().map(|&v| (self.k - v) as u64).sum()
    }

    /// `log_p |ker(M)|` for `M` acting on column vectors.
    pub fn kernel_log_size(&self) -> u64 {
        self.k as u64 * self.cols as u64 - self.image_log_size()
    }

    /// Diagonal matrix `D`.
    pub fn diagonal(&self, m: &Matrix) -> Matrix {
        let md = *m.modulus();
        let mut d = Matrix::zeros(md, self.rows, self.cols);
        for (i, &v) in self.valuations.iter().enumerate() {
            if v < self.k {
                d[(i, i)] = md.ppow(v);
            }
        }
        d
    }
}

/// Smith form; set `with_transforms` to also accumulate `U`, `U^-1`, `V`.
pub fn smith_normal_form(m: &Matrix, with_transforms: bool) -> SnfResult {
    if with_transforms {
        snf_with_transforms(m)
    } else {
        SnfResult {
            rows: m.rows(),
            cols: m.cols(),
            k: m.modulus().k(),
            valuations: snf_valuations(m.clone()),
            transforms: None,
        }
    }
}

/// Valuations only. Row eliminations suffice: after clearing the pivot
/// column, column operations would only touch the pivot row, which is then
/// dropped from the active block.
pub fn snf_valuations(mut a: Matrix) -> Vec<u32> {
    let md = *a.modulus();
    let k = md.k();
    let (rows, cols) = (a.rows(), a.cols());
    let n = rows.min(cols);
    let mut vals = Vec::with_capacity(n);
    for t in 0..n {
        let Some((pr, pc, v)) = min_valuation_entry(&a, t) else {
            vals.extend(std::iter::repeat_n(k, n - t));
            break;
        };
        vals.push(v);
        a.swap_rows(pr, t);
        a.swap_cols(pc, t);
        let (_, unit) = md.split(a[(t, t)]);
        let unit_inv = md.inv(unit).expect("unit part");
        let pv = md.ppow(v);
        for r in t + 1..rows {
            let x = a[(r, t)];
            if x == 0 {
                continue;
            }
            let f = md.mul(x / pv, unit_inv);
            let (head, tail) = a.row_pair_mut(t, r);
            for c in t + 1..cols {
                tail[c] = md.sub_mul(tail[c], f, head[c]);
            }
            tail[t] = 0;
        }
    }
    vals
}

/// Least-valuation nonzero entry in the block `[t.., t..]`, ties broken in
/// row-major order. Stops early on a unit.
fn min_valuation_entry(a: &Matrix, t: usize) -> Option<(usize, usize, u32)> {
    let md = a.modulus();
    let mut best: Option<(usize, usize, u32)> = None;
    for r in t..a.rows() {
        for (c, &x) in a.row(r).iter().enumerate().skip(t) {
            if x == 0 {
                continue;
            }
            let v = md.valuation(x);
            if best.is_none_or(|(_, _, bv)| v < bv) {
                best = Some((r, c, v));
                if v == 0 {
                    return best;
                }
            }
        }
    }
    best
}

fn snf_with_transforms(m: &Matrix) -> SnfResult {
    let md = *m.modulus();
    let k = md.k();
    let (rows, cols) = (m.rows(), m.cols());
    let n = rows.min(cols);
    let mut a = m.clone();
    let mut u = Matrix::identity(md, rows);
    let mut u_inv = Matrix::identity(md, rows);
    let mut v_mat = Matrix::identity(md, cols);
    let mut vals = Vec::with_capacity(n);

    for t in 0..n {
        let Some((pr, pc, v)) = min_valuation_entry(&a, t) else {
            vals.extend(std::iter::repeat_n(k, n - t));
            break;
        };
        vals.push(v);
        if pr != t {
            a.swap_rows(pr, t);
            u.swap_rows(pr, t);
            u_inv.swap_cols(pr, t);
        }
        if pc != t {
            a.swap_cols(pc, t);
            v_mat.swap_cols(pc, t);
        }
        let (_, unit) = md.split(a[(t, t)]);
        let unit_inv = md.inv(unit).expect("unit part");
        let pv = md.ppow(v);

        // Row operations: row_r -= f * row_t. In U^-1: col_t += f * col_r.
        for r in t + 1..rows {
            let x = a[(r, t)];
            if x == 0 {
                continue;
            }
            let f = md.mul(x / pv, unit_inv);
            for c in t..cols {
                a[(r, c)] = md.sub_mul(a[(r, c)], f, a[(t, c)]);
            }
            for c in 0..rows {
                u[(r, c)] = md.sub_mul(u[(r, c)], f, u[(t, c)]);
            }
            for rr in 0..rows {
                u_inv[(rr, t)] = md.add(u_inv[(rr, t)], md.mul(f, u_inv[(rr, r)]));
            }
        }
        // Column operations: col_c -= g * col_t, touching only row t of A.
        for c in t + 1..cols {
            let x = a[(t, c)];
            if x == 0 {
                continue;
            }
            let g = md.mul(x / pv, unit_inv);
            a[(t, c)] = 0;
            for r in 0..cols {
                v_mat[(r, c)] = md.sub_mul(v_mat[(r, c)], g, v_mat[(r, t)]);
            }
        }
        // Normalize the pivot to p^v: row_t *= unit^-1, col_t of U^-1 *= unit.
        if unit != 1 {
            a[(t, t)] = md.mul(a[(t, t)], unit_inv);
            for c in 0..rows {
                u[(t, c)] = md.mul(u[(t, c)], unit_inv);
            }
            for rr in 0..rows {
                u_inv[(rr, t)] = md.mul(u_inv[(rr, t)], unit);
            }
        }
    }

    SnfResult {
        rows,
        cols,
        k,
        valuations: vals,
        transforms: Some(SnfTransforms { u, u_inv, v: v_mat }),
    }
}
