use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ratlin::vector::to_rational;
use crate::ratlin::{rank, Matrix};
use crate::{IntVec, RatVec};

use super::{convex_hull, PolyhedraError, Polytope};

/// Cayley polytope `conv ⋃ᵢ (Pᵢ + eᵢ)` with its two genericity conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyPolytope {
    pub polytope: Polytope,
    /// Index of the polygon each vertex comes from.
    pub vertex_polygon: Vec<usize>,
    /// Every proper face missing `ℓ̃` is a simplex.
    pub simplicial_off_line: bool,
    /// The faces meeting `ℓ̃` are exactly the Cayley faces of the proper
    /// subfamilies of polygons, so their cones subdivide `ℓ̃`.
    pub subdivides_line: bool,
}

impl CayleyPolytope {
    pub fn is_generic(&self) -> bool {
        self.simplicial_off_line && self.subdivides_line
    }
}

/// Builds the Cayley polytope of planar polygons along a circuit.
///
/// Polygons are given by integer points in the plane of the first two
/// coordinates; circuit vectors must vanish there (so they lie in
/// `ℓ̃ = {x₁ = x₂ = 0}`), sum to zero, and have every proper subset independent.
pub fn cayley_polytope(polygons: &[Vec<IntVec>], circuit: &[IntVec]) -> Result<CayleyPolytope, PolyhedraError> {
    let m = circuit.len();
    if m < 2 || polygons.len() != m {
        return Err(PolyhedraError::NotACircuit(format!("{} vectors for {} polygons", m, polygons.len())));
    }
    let n = circuit[0].len();
    check_circuit(circuit, n)?;
    for (i, poly) in polygons.iter().enumerate() {
        let pts: Vec<RatVec> = poly.iter().map(|p| to_rational(p)).collect();
        if poly.iter().any(|p| p.len() != 2) || crate::ratlin::affine_dimension(&pts) != 2 {
            return Err(PolyhedraError::PolygonNotPlanar(i));
        }
    }

    let mut points: Vec<RatVec> = Vec::new();
    for (poly, e) in polygons.iter().zip(circuit) {
        for p in poly {
            let mut x = to_rational(e);
            x[0] = BigRational::from_integer(p[0].clone());
            x[1] = BigRational::from_integer(p[1].clone());
            points.push(x);
        }
    }
    let polytope = convex_hull(&points);
    let vertex_polygon: Vec<usize> = polytope
        .vertices
        .iter()
        .map(|v| {
            circuit
                .iter()
                .position(|e| e[2..].iter().zip(&v[2..]).all(|(a, b)| BigRational::from_integer(a.clone()) == *b))
                .expect("every vertex lies over a circuit vector")
        })
        .collect();

    let d = polytope.dim;
    let mut simplicial_off_line = true;
    let mut line_faces: Vec<(usize, BTreeSet<usize>, bool)> = Vec::new();
    for (k, level) in polytope.faces.iter().enumerate().take(d) {
        for face in level {
            let proj: Vec<[BigRational; 2]> = face
                .vertices
                .iter()
                .map(|&v| [polytope.vertices[v][0].clone(), polytope.vertices[v][1].clone()])
                .collect();
            if !origin_in_hull_2d(&proj) {
                if face.vertices.len() != k + 1 {
                    simplicial_off_line = false;
                }
                continue;
            }
            let js: BTreeSet<usize> = face.vertices.iter().map(|&v| vertex_polygon[v]).collect();
            let full = js.iter().all(|&j| {
                let all_j = (0..polytope.vertices.len()).filter(|&v| vertex_polygon[v] == j).count();
                face.vertices.iter().filter(|&&v| vertex_polygon[v] == j).count() == all_j
            });
            let right_dim = k == js.len() + 1;
            line_faces.push((k, js, full && right_dim));
        }
    }
    let facet_sets: BTreeSet<BTreeSet<usize>> =
        line_faces.iter().filter(|(k, _, _)| *k + 1 == d).map(|(_, js, _)| js.clone()).collect();
    let facet_count = line_faces.iter().filter(|(k, _, _)| *k + 1 == d).count();
    let subdivides_line = line_faces.iter().all(|(_, _, ok)| *ok)
        && facet_count == m
        && facet_sets.len() == m
        && facet_sets.iter().all(|js| js.len() == m - 1);

    Ok(CayleyPolytope { polytope, vertex_polygon, simplicial_off_line, subdivides_line })
}

fn check_circuit(circuit: &[IntVec], n: usize) -> Result<(), PolyhedraError> {
    if circuit.iter().any(|e| e.len() != n || n < 3 || !e[0].is_zero() || !e[1].is_zero()) {
        return Err(PolyhedraError::NotACircuit("vectors must lie in x1 = x2 = 0".into()));
    }
    for j in 0..n {
        let s: BigInt = circuit.iter().map(|e| e[j].clone()).sum();
        if !s.is_zero() {
            return Err(PolyhedraError::NotACircuit("vectors do not sum to zero".into()));
        }
    }
    let m = circuit.len();
    for skip in 0..m {
        let rows: Vec<RatVec> = (0..m).filter(|&i| i != skip).map(|i| to_rational(&circuit[i])).collect();
        if rank(&Matrix::from_rows(&rows, n)) != m - 1 {
            return Err(PolyhedraError::NotACircuit("a proper subset is dependent".into()));
        }
    }
    Ok(())
}

fn cross(a: &[BigRational; 2], b: &[BigRational; 2]) -> BigRational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Whether the origin lies in the convex hull of planar points (Carathéodory).
pub(crate) fn origin_in_hull_2d(pts: &[[BigRational; 2]]) -> bool {
    let zero = BigRational::zero();
    if pts.iter().any(|p| p[0].is_zero() && p[1].is_zero()) {
        return true;
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            // Origin on segment: collinear and opposite directions.
            let c = cross(&pts[i], &pts[j]);
            let dotp = &pts[i][0] * &pts[j][0] + &pts[i][1] * &pts[j][1];
            if c.is_zero() && dotp < zero {
                return true;
            }
            for k in j + 1..pts.len() {
                let s1 = cross(&pts[i], &pts[j]);
                let s2 = cross(&pts[j], &pts[k]);
                let s3 = cross(&pts[k], &pts[i]);
                let all_pos = !s1.is_negative() && !s2.is_negative() && !s3.is_negative();
                let all_neg = !s1.is_positive() && !s2.is_positive() && !s3.is_positive();
                let degenerate = s1.is_zero() && s2.is_zero() && s3.is_zero();
                if (all_pos || all_neg) && !degenerate {
                    return true;
                }
            }
        }
    }
    false
}
