use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::Matrix;
use crate::IntMatrix;

/// Smith normal form of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal matrix with `s[i][i] | s[i+1][i+1]` and nonnegative entries.
    pub s: IntMatrix,
    /// Unimodular row transform.
    pub u: IntMatrix,
    /// Unimodular column transform, `u * m * v = s`.
    pub v: IntMatrix,
    /// Inverse of `v`, tracked alongside it.
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        (0..self.s.rows().min(self.s.cols())).filter(|&i| !self.s[(i, i)].is_zero()).count()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank()).map(|i| self.s[(i, i)].clone()).collect()
    }
}

fn add_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let v = m[(src, j)].clone();
        if !v.is_zero() {
            m[(dst, j)] += k * v;
        }
    }
}

fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let v = m[(i, src)].clone();
        if !v.is_zero() {
            m[(i, dst)] += k * v;
        }
    }
}

/// Smith normal form with transforms: `u * m * v = s`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    // Column op `col_dst += k col_src` on v is mirrored by `row_src -= k row_dst` on v_inv.
    let col_op = |s: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst, src, k: &BigInt| {
        add_col_multiple(s, dst, src, k);
        add_col_multiple(v, dst, src, k);
        add_row_multiple(vi, src, dst, &-k);
    };

    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &s[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { s, u, v, v_inv };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                let q = &s[(i, t)] / &s[(t, t)];
                if !q.is_zero() {
                    let nq = -q;
                    add_row_multiple(&mut s, i, t, &nq);
                    add_row_multiple(&mut u, i, t, &nq);
                }
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = &s[(t, j)] / &s[(t, t)];
                if !q.is_zero() {
                    col_op(&mut s, &mut v, &mut v_inv, j, t, &-q);
                }
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let p = s[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !s[(i, j)].is_multiple_of(&p)));
            if let Some(i) = bad {
                add_row_multiple(&mut s, t, i, &BigInt::one());
                add_row_multiple(&mut u, t, i, &BigInt::one());
                continue;
            }
            break;
        }
        if s[(t, t)].is_negative() {
            for j in 0..c {
                s[(t, j)] = -s[(t, j)].clone();
            }
            for j in 0..r {
                u[(t, j)] = -u[(t, j)].clone();
            }
        }
    }
    SmithForm { s, u, v, v_inv }
}

/// Row-style Hermite normal form: the nonzero rows of the echelon basis of the
/// row lattice, with positive pivots and entries above each pivot reduced into
/// `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pick =
                (r..rows).filter(|&i| !h[(i, c)].is_zero()).min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(p) = pick else { break };
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, c)] / &h[(r, c)]);
                add_row_multiple(&mut h, i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            for j in 0..cols {
                h[(r, j)] = -h[(r, j)].clone();
            }
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            add_row_multiple(&mut h, i, r, &q);
        }
        r += 1;
    }
    let kept: Vec<Vec<BigInt>> = (0..r).map(|i| h.row(i).to_vec()).collect();
    Matrix::from_rows(&kept, cols)
}

/// Pivot column of each row of a matrix in Hermite normal form.
pub fn hermite_pivots(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows()).map(|i| (0..h.cols()).find(|&j| !h[(i, j)].is_zero()).expect("HNF rows are nonzero")).collect()
}

/// Canonical representative of `v` modulo the row lattice of the HNF `h`.
pub fn reduce_mod_hermite(v: &[BigInt], h: &IntMatrix) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for (i, p) in hermite_pivots(h).into_iter().enumerate() {
        let q = out[p].div_floor(&h[(i, p)]);
        if !q.is_zero() {
            for j in 0..out.len() {
                out[j] -= &q * &h[(i, j)];
            }
        }
    }
    out
}
