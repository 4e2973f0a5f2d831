//! Exact rational polytopes and polyhedral fans.

mod cayley;
mod fan;
mod flags;
mod hull;

pub use cayley::{cayley_polytope, CayleyPolytope};
pub use fan::{cone_faces, face_fan, normal_fan, triangulate_fan, Cone, Fan, NormalFan};
pub use flags::{cone_meets_halfplane, FlagPair};
pub use hull::convex_hull;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ratlin::vector::{dot, primitive_of_rational, scale, to_rational};
use crate::{IntVec, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyhedraError {
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("ray {0} lies in the hyperplane L")]
    NotTransversal(usize),
    #[error("vectors do not form a circuit: {0}")]
    NotACircuit(String),
    #[error("polygon {0} is not a two-dimensional polygon")]
    PolygonNotPlanar(usize),
    #[error("cone is not pointed or lists a non-extreme ray")]
    BadCone,
}

/// Inequality `⟨normal, x⟩ ≤ offset` (or an equation, in `Polytope::equations`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: IntVec,
    pub offset: BigRational,
}

/// A face as a set of vertex indices together with the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub facets: Vec<usize>,
}

/// Rational polytope with matching V- and H-representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<RatVec>,
    /// Facet inequalities with primitive integer normals.
    pub facets: Vec<Facet>,
    /// Equations of the affine span (empty when full-dimensional).
    pub equations: Vec<Facet>,
    /// `faces[k]` holds the `k`-dimensional faces; `faces[dim - 1][i]` is facet `i`.
    pub faces: Vec<Vec<Face>>,
}

impl Polytope {
    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn facet_vertices(&self, facet: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.is_incident(v, facet)).collect()
    }

    pub fn is_incident(&self, vertex: usize, facet: usize) -> bool {
        let f = &self.facets[facet];
        dot(&to_rational(&f.normal), &self.vertices[vertex]) == f.offset
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.equations.iter().all(|e| dot(&to_rational(&e.normal), x) == e.offset)
            && self.facets.iter().all(|f| dot(&to_rational(&f.normal), x) <= f.offset)
    }

    /// Every vertex satisfies every inequality, with equality exactly on the
    /// facets recorded as containing it, and every face's vertex set is cut out
    /// by its facets.
    pub fn check_representation(&self) -> bool {
        for (v, x) in self.vertices.iter().enumerate() {
            if !self.equations.iter().all(|e| dot(&to_rational(&e.normal), x) == e.offset) {
                return false;
            }
            for (i, f) in self.facets.iter().enumerate() {
                let val = dot(&to_rational(&f.normal), x);
                if val > f.offset {
                    return false;
                }
                let on = val == f.offset;
                let listed = self.dim > 0 && self.faces[self.dim - 1][i].vertices.contains(&v);
                if on != listed {
                    return false;
                }
            }
        }
        for level in self.faces.iter().take(self.dim) {
            for face in level {
                let cut: Vec<usize> =
                    (0..self.vertices.len()).filter(|&v| face.facets.iter().all(|&f| self.is_incident(v, f))).collect();
                if cut != face.vertices {
                    return false;
                }
            }
        }
        true
    }

    /// Polar dual `{y : ⟨x, y⟩ ≤ 1 for all x in self}`, with the face lattice
    /// obtained by reversing this one.
    pub fn polar(&self) -> Result<Polytope, PolyhedraError> {
        if !self.is_full_dimensional() {
            return Err(PolyhedraError::NotFullDimensional);
        }
        if self.facets.iter().any(|f| !f.offset.is_positive()) {
            return Err(PolyhedraError::OriginNotInterior);
        }
        let d = self.dim;
        let raw_vertices: Vec<RatVec> = self
            .facets
            .iter()
            .map(|f| scale(&(BigRational::from_integer(1.into()) / f.offset.clone()), &to_rational(&f.normal)))
            .collect();
        let mut order: Vec<usize> = (0..raw_vertices.len()).collect();
        order.sort_by(|&a, &b| raw_vertices[a].cmp(&raw_vertices[b]));
        let mut new_index = vec![0; order.len()];
        for (k, &old) in order.iter().enumerate() {
            new_index[old] = k;
        }
        let vertices: Vec<RatVec> = order.iter().map(|&i| raw_vertices[i].clone()).collect();
        // Vertex x of self gives the facet ⟨x, y⟩ ≤ 1, rescaled to a primitive normal.
        let facets: Vec<Facet> = self
            .vertices
            .iter()
            .map(|x| {
                let normal = primitive_of_rational(x);
                let nr = to_rational(&normal);
                let k = x.iter().zip(&nr).find(|(a, _)| !a.is_zero()).map(|(a, b)| b / a).unwrap();
                Facet { normal, offset: k }
            })
            .collect();
        let mut faces: Vec<Vec<Face>> = vec![Vec::new(); d + 1];
        for (k, level) in self.faces.iter().enumerate() {
            for face in level {
                let mut verts: Vec<usize> = face.facets.iter().map(|&f| new_index[f]).collect();
                verts.sort();
                let facet_set = face.vertices.clone();
                if k == d {
                    continue;
                }
                faces[d - 1 - k].push(Face { vertices: verts, facets: facet_set });
            }
        }
        faces[d].push(Face { vertices: (0..vertices.len()).collect(), facets: vec![] });
        // Facet order must match `facets`, i.e. the old vertex order.
        faces[d - 1].sort_by_key(|f| f.facets[0]);
        for level in faces.iter_mut().take(d - 1) {
            level.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        }
        let out = Polytope { ambient_dim: d, dim: d, vertices, facets, equations: vec![], faces };
        debug_assert!(out.check_representation());
        Ok(out)
    }
}
