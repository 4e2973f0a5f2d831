use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::lattice::{coordinates, saturation};
use super::vector::{dot, primitive_of_rational, sub, to_rational};
use super::{rank, Matrix, RatlinError};
use crate::polyhedra::convex_hull;

/// Dimension of the affine span of `points` (`-1` for no points).
pub fn affine_dimension(points: &[Vec<BigRational>]) -> isize {
    let Some(p0) = points.first() else { return -1 };
    let diffs: Vec<Vec<BigRational>> = points[1..].iter().map(|p| sub(p, p0)).collect();
    rank(&Matrix::from_rows(&diffs, p0.len())) as isize
}

/// Lattice-normalized `d`-volume of the convex hull of `points`: `d!` times the
/// Euclidean volume, measured against the lattice of integer points in the
/// direction space of the affine span. Rational vertices are allowed.
pub fn normalized_volume(points: &[Vec<BigRational>], d: usize) -> Result<BigRational, RatlinError> {
    let found = affine_dimension(points);
    if found != d as isize {
        return Err(RatlinError::DimensionMismatch { expected: d, found });
    }
    if d == 0 {
        return Ok(BigRational::from_integer(1.into()));
    }
    let p0 = &points[0];
    let diffs: Vec<Vec<num_bigint::BigInt>> = points[1..]
        .iter()
        .map(|p| primitive_of_rational(&sub(p, p0)))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let basis = saturation(&Matrix::from_rows(&diffs, p0.len()));
    let local: Vec<Vec<BigRational>> =
        points.iter().map(|p| coordinates(&basis, &sub(p, p0)).expect("point lies in its own affine span")).collect();
    Ok(full_dimensional_volume(&local, d))
}

// Pyramid decomposition from the first vertex: each facet missing it
// contributes lattice height times its own normalized volume.
fn full_dimensional_volume(points: &[Vec<BigRational>], d: usize) -> BigRational {
    if d == 1 {
        let xs: Vec<&BigRational> = points.iter().map(|p| &p[0]).collect();
        let lo = xs.iter().min().unwrap();
        let hi = xs.iter().max().unwrap();
        return (*hi).clone() - (*lo).clone();
    }
    let hull = convex_hull(points);
    let apex = &hull.vertices[0];
    let mut total = BigRational::zero();
    for (fi, facet) in hull.facets.iter().enumerate() {
        let normal = to_rational(&facet.normal);
        let height = facet.offset.clone() - dot(&normal, apex);
        if height.is_zero() {
            continue;
        }
        debug_assert!(height.is_positive());
        let verts: Vec<Vec<BigRational>> =
            hull.facet_vertices(fi).into_iter().map(|v| hull.vertices[v].clone()).collect();
        let base = normalized_volume(&verts, d - 1).expect("facets have codimension one");
        total += height * base;
    }
    total
}
