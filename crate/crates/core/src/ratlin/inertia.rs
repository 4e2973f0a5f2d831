use super::{Matrix, RatlinError, Scalar};

/// Counts of positive, zero and negative eigenvalues of a symmetric form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct InertiaTriple {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl InertiaTriple {
    pub fn new(n_plus: usize, n_zero: usize, n_minus: usize) -> Self {
        InertiaTriple { n_plus, n_zero, n_minus }
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }
}

/// Signature of a symmetric matrix by congruence (Sylvester's law).
///
/// Eliminates with 1×1 diagonal pivots while one is available and falls back
/// to a 2×2 block `[[0, b], [b, 0]]` (one positive, one negative eigenvalue)
/// when the remaining diagonal vanishes.
pub fn inertia<T: Scalar>(m: &Matrix<T>) -> Result<InertiaTriple, RatlinError> {
    if m.rows() != m.cols() {
        return Err(RatlinError::NonSymmetric);
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..i {
            if !(m[(i, j)].clone() - m[(j, i)].clone()).is_negligible() {
                return Err(RatlinError::NonSymmetric);
            }
        }
    }
    let mut a: Vec<Vec<T>> = m.to_rows();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = InertiaTriple::default();

    while !active.is_empty() {
        let diag = if T::EXACT {
            active.iter().copied().find(|&i| !a[i][i].is_zero())
        } else {
            active
                .iter()
                .copied()
                .filter(|&i| !a[i][i].is_negligible())
                .max_by(|&x, &y| a[x][x].abs().partial_cmp(&a[y][y].abs()).unwrap())
        };
        if let Some(p) = diag {
            let d = a[p][p].clone();
            if d.is_positive() {
                out.n_plus += 1;
            } else {
                out.n_minus += 1;
            }
            active.retain(|&i| i != p);
            for &i in &active {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = a[i][p].clone() / d.clone();
                for &j in &active {
                    let v = a[p][j].clone();
                    if !v.is_zero() {
                        a[i][j] = a[i][j].clone() - f.clone() * v;
                    }
                }
            }
            continue;
        }
        let off = active
            .iter()
            .copied()
            .find_map(|i| active.iter().copied().find(|&j| j != i && !a[i][j].is_negligible()).map(|j| (i, j)));
        let Some((p, q)) = off else {
            out.n_zero += active.len();
            break;
        };
        out.n_plus += 1;
        out.n_minus += 1;
        let b = a[p][q].clone();
        active.retain(|&i| i != p && i != q);
        // Schur complement against [[0, b], [b, 0]], whose inverse is [[0, 1/b], [1/b, 0]].
        let updates: Vec<(usize, usize, T)> = active
            .iter()
            .flat_map(|&i| active.iter().map(move |&j| (i, j)))
            .map(|(i, j)| {
                let t = (a[i][p].clone() * a[q][j].clone() + a[i][q].clone() * a[p][j].clone()) / b.clone();
                (i, j, t)
            })
            .collect();
        for (i, j, t) in updates {
            if !t.is_zero() {
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
    Ok(out)
}
