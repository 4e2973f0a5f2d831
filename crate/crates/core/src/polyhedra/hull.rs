use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ratlin::vector::{dot, primitive_of_rational, sub, to_rational};
use crate::ratlin::{inverse, kernel_basis, rank, rref, Matrix};
use crate::{IntVec, RatVec};

use super::{Face, Facet, Polytope};

/// Convex hull of a nonempty point set, with minimal V-representation,
/// complete H-representation and face lattice.
///
/// Lower-dimensional inputs are handled in coordinates of their affine span and
/// carry the span as `equations`. Vertices are sorted lexicographically.
pub fn convex_hull(points: &[RatVec]) -> Polytope {
    assert!(!points.is_empty(), "convex hull of an empty set");
    let m = points[0].len();
    let mut pts: Vec<RatVec> = points.to_vec();
    pts.sort();
    pts.dedup();

    let p0 = pts[0].clone();
    let diffs: Vec<RatVec> = pts.iter().map(|p| sub(p, &p0)).collect();
    let diff_m = Matrix::from_rows(&diffs, m);
    let (_, pivots) = rref(&diff_m);
    let d = pivots.len();

    let equations: Vec<Facet> = kernel_basis(&diff_m)
        .into_iter()
        .map(|k| {
            let normal = primitive_of_rational(&k);
            let offset = dot(&to_rational(&normal), &p0);
            Facet { normal, offset }
        })
        .collect();

    if d == 0 {
        return Polytope {
            ambient_dim: m,
            dim: 0,
            vertices: vec![p0],
            facets: vec![],
            equations,
            faces: vec![vec![Face { vertices: vec![0], facets: vec![] }]],
        };
    }

    // Projection onto the pivot coordinates is injective on the affine span.
    let project = |p: &RatVec| -> RatVec { pivots.iter().map(|&j| p[j].clone()).collect() };
    let local: Vec<RatVec> = pts.iter().map(project).collect();
    let local_facets = double_description(&local, d);

    let mut facets: Vec<Facet> = local_facets
        .into_iter()
        .map(|(a, b)| {
            let mut normal = vec![BigInt::zero(); m];
            for (k, &j) in pivots.iter().enumerate() {
                normal[j] = a[k].clone();
            }
            Facet { normal, offset: b }
        })
        .collect();
    facets.sort();
    facets.dedup();

    let incident = |p: &RatVec| -> Vec<usize> {
        facets.iter().enumerate().filter(|(_, f)| dot(&to_rational(&f.normal), p) == f.offset).map(|(i, _)| i).collect()
    };
    let mut vertices = Vec::new();
    for p in &pts {
        let inc = incident(p);
        let normals: Vec<RatVec> = inc.iter().map(|&i| to_rational(&facets[i].normal)).collect();
        if rank(&Matrix::from_rows(&normals, m)) == d {
            vertices.push(p.clone());
        }
    }
    let vertex_facets: Vec<Vec<usize>> = vertices.iter().map(incident).collect();
    let faces = face_lattice(d, vertices.len(), facets.len(), &vertex_facets);
    Polytope { ambient_dim: m, dim: d, vertices, facets, equations, faces }
}

/// Facets `(normal, offset)` with `⟨normal, x⟩ ≤ offset` of a full-dimensional
/// point set in `ℚ^d`, via double description on the homogenized polar cone.
fn double_description(points: &[RatVec], d: usize) -> Vec<(IntVec, BigRational)> {
    let gens: Vec<RatVec> =
        points.iter().map(|p| std::iter::once(BigRational::one()).chain(p.iter().cloned()).collect()).collect();

    let mut basis: Vec<usize> = Vec::new();
    for i in 0..gens.len() {
        let mut rows: Vec<RatVec> = basis.iter().map(|&b| gens[b].clone()).collect();
        rows.push(gens[i].clone());
        if rank(&Matrix::from_rows(&rows, d + 1)) == rows.len() {
            basis.push(i);
            if basis.len() == d + 1 {
                break;
            }
        }
    }
    assert_eq!(basis.len(), d + 1, "points must be affinely spanning");

    let g0 = Matrix::from_rows(&basis.iter().map(|&b| gens[b].clone()).collect::<Vec<_>>(), d + 1);
    let inv = inverse(&g0).expect("basis generators are independent");
    let mut rays: Vec<(RatVec, BTreeSet<usize>)> = (0..=d)
        .map(|j| {
            let zero: BTreeSet<usize> = basis.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &b)| b).collect();
            (inv.col(j), zero)
        })
        .collect();

    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for k in (0..gens.len()).filter(|k| !in_basis.contains(k)) {
        let vals: Vec<BigRational> = rays.iter().map(|(r, _)| dot(&gens[k], r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<(RatVec, BTreeSet<usize>)> = Vec::new();
        for i in 0..rays.len() {
            if vals[i].is_zero() {
                let mut z = rays[i].1.clone();
                z.insert(k);
                next.push((rays[i].0.clone(), z));
            } else if vals[i].is_positive() {
                next.push(rays[i].clone());
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common: BTreeSet<usize> = rays[p].1.intersection(&rays[q].1).copied().collect();
                if common.len() + 1 < d {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|r| r == p || r == q || !common.is_subset(&rays[r].1));
                if !adjacent {
                    continue;
                }
                let new: RatVec =
                    rays[q].0.iter().zip(&rays[p].0).map(|(a, b)| vals[p].clone() * a - vals[q].clone() * b).collect();
                let mut z = common;
                z.insert(k);
                next.push((new, z));
            }
        }
        rays = next;
    }

    rays.into_iter()
        .map(|(r, _)| {
            // r₀ + ⟨r', x⟩ ≥ 0 becomes ⟨-r', x⟩ ≤ r₀ with a primitive integer normal.
            let l = r.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let ints: Vec<BigInt> = r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
            let g = ints[1..].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let normal: IntVec = ints[1..].iter().map(|x| -(x / &g)).collect();
            (normal, BigRational::new(ints[0].clone(), g))
        })
        .collect()
}

/// Face lattice from vertex-facet incidences; `faces[k]` lists the `k`-faces
/// and `faces[d]` is the polytope itself.
pub(crate) fn face_lattice(
    d: usize,
    n_vertices: usize,
    n_facets: usize,
    vertex_facets: &[Vec<usize>],
) -> Vec<Vec<Face>> {
    let mut facet_vertices: Vec<Vec<usize>> = vec![Vec::new(); n_facets];
    for (v, fs) in vertex_facets.iter().enumerate() {
        for &f in fs {
            facet_vertices[f].push(v);
        }
    }
    let facets_of = |verts: &[usize]| -> Vec<usize> {
        (0..n_facets).filter(|&f| verts.iter().all(|v| vertex_facets[*v].contains(&f))).collect()
    };

    let mut faces: Vec<Vec<Face>> = vec![Vec::new(); d + 1];
    faces[d].push(Face { vertices: (0..n_vertices).collect(), facets: vec![] });
    if d == 0 {
        return faces;
    }
    // Keeping facet order here makes faces[d - 1][i] the i-th facet.
    faces[d - 1] = facet_vertices.iter().map(|vs| Face { vertices: vs.clone(), facets: facets_of(vs) }).collect();
    for k in (1..d).rev() {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut level: Vec<Face> = Vec::new();
        for g in &faces[k] {
            let gset: BTreeSet<usize> = g.vertices.iter().copied().collect();
            let mut candidates: Vec<Vec<usize>> = Vec::new();
            for fv in &facet_vertices {
                let inter: Vec<usize> = fv.iter().copied().filter(|v| gset.contains(v)).collect();
                if !inter.is_empty() && inter.len() < g.vertices.len() {
                    candidates.push(inter);
                }
            }
            candidates.sort();
            candidates.dedup();
            for c in &candidates {
                let maximal =
                    !candidates.iter().any(|o| o.len() > c.len() && c.iter().all(|v| o.binary_search(v).is_ok()));
                if maximal && seen.insert(c.clone()) {
                    level.push(Face { vertices: c.clone(), facets: facets_of(c) });
                }
            }
        }
        level.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        faces[k - 1] = level;
    }
    faces
}
