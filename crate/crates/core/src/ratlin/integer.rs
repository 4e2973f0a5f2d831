//! Fraction-free elimination on integer matrices.
//!
//! Rows are kept primitive after every update, and pivots are chosen to keep
//! sparse systems sparse. This is much faster than rational elimination on
//! the balancing systems, which have a handful of nonzeros per row.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::vector::{gcd, gcd_all, primitive};
use crate::{IntMatrix, IntVec};

/// Reduced fraction-free form: each pivot row has its pivot column as the
/// only nonzero among all pivot columns.
struct Reduced {
    /// `(pivot column, row)` pairs.
    rows: Vec<(usize, IntVec)>,
    cols: usize,
}

fn make_primitive(row: &mut IntVec) {
    let g = gcd_all(row);
    if !g.is_zero() && !g.is_one() {
        row.iter_mut().for_each(|x| *x /= &g);
    }
}

fn nnz(row: &[BigInt]) -> usize {
    row.iter().filter(|x| !x.is_zero()).count()
}

fn reduce(m: &IntMatrix) -> Reduced {
    let nonzero = m.entries().iter().filter(|x| !x.is_zero()).count();
    if 2 * nonzero > m.entries().len() {
        reduce_dense(m)
    } else {
        reduce_sparse(m)
    }
}

/// Fraction-free Gauss–Jordan elimination (Bareiss): every entry stays a
/// minor of the input, so the divisions by the previous pivot are exact.
fn reduce_dense(m: &IntMatrix) -> Reduced {
    let cols = m.cols();
    let mut a = m.to_rows();
    let mut prev = BigInt::one();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; a.len()];
    for c in 0..cols {
        let Some(r) = (0..a.len()).find(|&i| !used[i] && !a[i][c].is_zero()) else {
            continue;
        };
        used[r] = true;
        let row = a[r].clone();
        let p = row[c].clone();
        for (i, other) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = other[c].clone();
            for j in 0..cols {
                if other[j].is_zero() && row[j].is_zero() {
                    continue;
                }
                let x = &other[j] * &p - &row[j] * &f;
                other[j] = x / &prev;
            }
        }
        pivots.push((c, r));
        prev = p;
    }
    let rows = pivots.into_iter().map(|(c, r)| (c, std::mem::take(&mut a[r]))).collect();
    Reduced { rows, cols }
}

/// Sparse elimination with content removal and Markowitz-style pivoting.
fn reduce_sparse(m: &IntMatrix) -> Reduced {
    let cols = m.cols();
    let mut pending: Vec<IntVec> = m.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    pending.iter_mut().for_each(make_primitive);
    let mut done: Vec<(usize, IntVec)> = Vec::new();
    while !pending.is_empty() {
        // Sparsest row, then the column in it touched by the fewest pending rows.
        let (ri, _) = pending.iter().enumerate().min_by_key(|(_, r)| nnz(r)).expect("nonempty");
        let row = pending.swap_remove(ri);
        let c = (0..cols)
            .filter(|&j| !row[j].is_zero())
            .min_by_key(|&j| (pending.iter().filter(|r| !r[j].is_zero()).count(), row[j].magnitude().clone()))
            .expect("pending rows are nonzero");
        let support: Vec<usize> = (0..cols).filter(|&j| !row[j].is_zero()).collect();
        let eliminate = |other: &mut IntVec| {
            if other[c].is_zero() {
                return;
            }
            let g = gcd(&row[c], &other[c]);
            let a = &row[c] / &g;
            let b = &other[c] / &g;
            if !a.is_one() {
                other.iter_mut().filter(|x| !x.is_zero()).for_each(|x| *x *= &a);
            }
            for &j in &support {
                other[j] -= &row[j] * &b;
            }
            make_primitive(other);
        };
        for other in pending.iter_mut() {
            eliminate(other);
        }
        for (_, other) in done.iter_mut() {
            eliminate(other);
        }
        pending.retain(|r| r.iter().any(|x| !x.is_zero()));
        done.push((c, row));
    }
    Reduced { rows: done, cols }
}

/// Rank of an integer matrix, by Bareiss elimination.
pub fn integer_rank(m: &IntMatrix) -> usize {
    let mut a = m.to_rows();
    let cols = m.cols();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot = &head[r];
        for row in tail.iter_mut() {
            for j in c + 1..cols {
                let x = &row[j] * &pivot[c] - &row[c] * &pivot[j];
                row[j] = x / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot[c].clone();
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Primitive integer basis of the right kernel, one vector per free column.
/// Vector `k` is the unique kernel element supported on the pivot columns
/// and the `k`-th free column, with positive entry there.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<IntVec> {
    let red = reduce(m);
    let n = red.cols;
    let mut is_pivot = vec![false; n];
    for (c, _) in &red.rows {
        is_pivot[*c] = true;
    }
    let mut out = Vec::new();
    for f in (0..n).filter(|&j| !is_pivot[j]) {
        // d_i x_{c_i} + r_i[f] x_f = 0 on every pivot row.
        let l = red.rows.iter().filter(|(_, r)| !r[f].is_zero()).fold(BigInt::one(), |acc, (c, r)| acc.lcm(&r[*c]));
        let mut v = vec![BigInt::zero(); n];
        v[f] = l.clone();
        for (c, r) in &red.rows {
            if !r[f].is_zero() {
                v[*c] = -(&l * &r[f]) / &r[*c];
            }
        }
        let mut v = primitive(&v);
        if v[f].is_negative() {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
        out.push(v);
    }
    out
}
