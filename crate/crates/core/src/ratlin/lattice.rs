use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::integer::integer_kernel_basis;
use super::normal_form::{hermite_normal_form, hermite_pivots, reduce_mod_hermite, smith_normal_form};
use super::vector::{dot, primitive_of_rational};
use super::{solve, Matrix, RatlinError};
use crate::{IntMatrix, RatMatrix};

pub fn to_rat_matrix(m: &IntMatrix) -> RatMatrix {
    m.map(|x| BigRational::from_integer(x.clone()))
}

/// Integer basis (in Hermite form) of `span(rows) ∩ ℤⁿ`.
pub fn saturation(generators: &IntMatrix) -> IntMatrix {
    let smith = smith_normal_form(generators);
    let r = smith.rank();
    let rows: Vec<Vec<BigInt>> = (0..r).map(|i| smith.v_inv.row(i).to_vec()).collect();
    hermite_normal_form(&Matrix::from_rows(&rows, generators.cols()))
}

/// Coordinates of `v` in the row basis `basis`, if `v` lies in its rational span.
pub fn coordinates(basis: &IntMatrix, v: &[BigRational]) -> Option<Vec<BigRational>> {
    solve(&to_rat_matrix(&basis.transpose()), v)
}

/// Generator of the rank-one lattice `(H_σ ∩ ℤⁿ) / (H_τ ∩ ℤⁿ)` on the side of
/// `witness`, reduced modulo the Hermite basis of `H_τ ∩ ℤⁿ`.
///
/// `span_sigma` and `span_tau` hold spanning vectors as rows.
pub fn primitive_quotient_generator(
    span_sigma: &IntMatrix,
    span_tau: &IntMatrix,
    witness: &[BigRational],
) -> Result<Vec<BigInt>, RatlinError> {
    quotient_generator_saturated(&saturation(span_sigma), &saturation(span_tau), witness)
}

/// [`primitive_quotient_generator`] for saturated lattice bases in Hermite
/// form, as returned by [`saturation`].
pub fn quotient_generator_saturated(
    bs: &IntMatrix,
    bt: &IntMatrix,
    witness: &[BigRational],
) -> Result<Vec<BigInt>, RatlinError> {
    let n = bs.cols();
    let p = bs.rows();
    if p != bt.rows() + 1 {
        return Err(RatlinError::BadCorank { found: p as isize - bt.rows() as isize });
    }
    // τ-basis in σ-lattice coordinates; integral because bs is saturated.
    let mut c_rows = Vec::with_capacity(bt.rows());
    for i in 0..bt.rows() {
        let x = echelon_coordinates(bs, bt.row(i)).ok_or(RatlinError::BadCorank { found: -1 })?;
        c_rows.push(x);
    }
    let c = Matrix::from_rows(&c_rows, p);
    let smith = smith_normal_form(&c);
    let g_coords = smith.v_inv.row(p - 1).to_vec();

    // Sign through a functional on σ-coordinates that vanishes on τ.
    let ker = if c.rows() == 0 { vec![vec![BigInt::one()]] } else { integer_kernel_basis(&c) };
    debug_assert_eq!(ker.len(), 1);
    let f = &ker[0];
    // A positive multiple of the witness is a lattice vector, with integer
    // coordinates in the saturated basis when it lies in the span.
    let w = echelon_coordinates(bs, &primitive_of_rational(witness)).ok_or(RatlinError::WitnessOutsideSpan)?;
    let sw = dot(f, &w);
    if sw.is_zero() {
        return Err(RatlinError::WitnessInTau);
    }
    let sg = dot(f, &g_coords);
    let flip = sg.is_positive() != sw.is_positive();

    let mut g = vec![BigInt::zero(); n];
    for (k, coef) in g_coords.iter().enumerate() {
        for j in 0..n {
            g[j] += coef * &bs[(k, j)];
        }
    }
    if flip {
        g.iter_mut().for_each(|x| *x = -x.clone());
    }
    Ok(reduce_mod_hermite(&g, bt))
}

/// Integer coordinates of `v` in the rows of the echelon matrix `h`, by
/// forward substitution on the pivot columns and an exact check of the
/// remainder. `None` when `v` is not in the row lattice.
fn echelon_coordinates(h: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let pivots = hermite_pivots(h);
    let mut x: Vec<BigInt> = Vec::with_capacity(h.rows());
    for (k, &p) in pivots.iter().enumerate() {
        let mut rest = v[p].clone();
        for (i, xi) in x.iter().enumerate() {
            rest -= xi * &h[(i, p)];
        }
        let (q, r) = rest.div_rem(&h[(k, p)]);
        if !r.is_zero() {
            return None;
        }
        x.push(q);
    }
    for j in 0..h.cols() {
        let acc: BigInt = x.iter().enumerate().map(|(i, xi)| xi * &h[(i, j)]).sum();
        if acc != v[j] {
            return None;
        }
    }
    Some(x)
}

/// Index of the lattice spanned by `rows` inside its saturation.
pub fn lattice_index(rows: &IntMatrix) -> BigInt {
    smith_normal_form(rows).invariant_factors().iter().product()
}
