use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::polyhedra::cone_faces;
use crate::ratlin::vector::{is_primitive, to_rational};
use crate::ratlin::{integer_rank, solve, Matrix};
use crate::{IntMatrix, IntVec, RatVec};

use super::TropicalError;

/// A cone of a weighted fan: ray indices and a rational weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightedCone {
    pub rays: Vec<usize>,
    pub weight: BigRational,
}

/// Pure-dimensional rational fan with weights on its maximal cones and an
/// optional lineality space shared by all cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedFan {
    pub ambient_dim: usize,
    /// Pure dimension, including the lineality space.
    pub dim: usize,
    pub rays: Vec<IntVec>,
    pub lineality: Vec<IntVec>,
    pub cones: Vec<WeightedCone>,
}

/// A codimension-one face together with the maximal cones containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Ridge {
    pub rays: Vec<usize>,
    /// `(cone index, a ray of that cone outside the ridge)`.
    pub cofaces: Vec<(usize, usize)>,
}

impl WeightedFan {
    /// Validates ray primitivity and purity; the dimension is read off the cones
    /// (or taken from `dim` when there are none).
    pub fn new(
        ambient_dim: usize,
        dim: usize,
        rays: Vec<IntVec>,
        lineality: Vec<IntVec>,
        mut cones: Vec<WeightedCone>,
    ) -> Result<Self, TropicalError> {
        if rays.iter().chain(&lineality).any(|r| r.len() != ambient_dim) {
            return Err(TropicalError::Malformed("vector of wrong length".into()));
        }
        if rays.iter().any(|r| !is_primitive(r)) {
            return Err(TropicalError::Malformed("ray is not a primitive integer vector".into()));
        }
        for c in &mut cones {
            c.rays.sort_unstable();
            if c.rays.iter().any(|&r| r >= rays.len()) {
                return Err(TropicalError::Malformed("ray index out of range".into()));
            }
        }
        let f = WeightedFan { ambient_dim, dim, rays, lineality, cones };
        if !f.cones.is_empty() {
            let d = f.pure_dim()?;
            if d != dim {
                return Err(TropicalError::NotPure);
            }
        }
        Ok(f)
    }

    /// Dimension of the cone spanned by the lineality space and the given rays.
    pub fn cone_dim(&self, rays: &[usize]) -> usize {
        integer_rank(&self.span_rows(rays))
    }

    /// The common dimension of all cones.
    pub fn pure_dim(&self) -> Result<usize, TropicalError> {
        let mut d = None;
        for c in &self.cones {
            let k = self.cone_dim(&c.rays);
            match d {
                None => d = Some(k),
                Some(x) if x != k => return Err(TropicalError::NotPure),
                _ => {}
            }
        }
        Ok(d.unwrap_or(self.dim))
    }

    pub fn is_simplicial(&self) -> bool {
        let l = self.lineality.len();
        self.cones.iter().all(|c| self.cone_dim(&c.rays) == l + c.rays.len())
    }

    /// Lineality vectors followed by the given rays, as integer rows.
    pub fn span_rows(&self, rays: &[usize]) -> IntMatrix {
        let rows: Vec<IntVec> =
            self.lineality.iter().cloned().chain(rays.iter().map(|&r| self.rays[r].clone())).collect();
        Matrix::from_rows(&rows, self.ambient_dim)
    }

    /// Coordinates of `v` in the basis (rays of the cone, then lineality) of a
    /// simplicial cone's span.
    pub(crate) fn cone_coordinates(&self, rays: &[usize], v: &[BigRational]) -> Option<RatVec> {
        let cols: Vec<RatVec> = rays
            .iter()
            .map(|&r| to_rational(&self.rays[r]))
            .chain(self.lineality.iter().map(|l| to_rational(l)))
            .collect();
        let m = Matrix::from_cols(&cols, self.ambient_dim);
        let x = solve(&m, v)?;
        Some(x)
    }

    /// Drops zero-weight cones.
    pub fn prune_zero(&mut self) {
        self.cones.retain(|c| !c.weight.is_zero());
    }

    /// Removes rays not used by any cone; returns the new fan and, for each old
    /// ray, its new index.
    pub fn compact(&self) -> (WeightedFan, Vec<Option<usize>>) {
        let mut used = vec![false; self.rays.len()];
        for c in &self.cones {
            for &r in &c.rays {
                used[r] = true;
            }
        }
        let mut map = vec![None; self.rays.len()];
        let mut rays = Vec::new();
        for (i, u) in used.iter().enumerate() {
            if *u {
                map[i] = Some(rays.len());
                rays.push(self.rays[i].clone());
            }
        }
        let cones = self
            .cones
            .iter()
            .map(|c| WeightedCone { rays: c.rays.iter().map(|&r| map[r].unwrap()).collect(), weight: c.weight.clone() })
            .collect();
        (
            WeightedFan {
                ambient_dim: self.ambient_dim,
                dim: self.dim,
                rays,
                lineality: self.lineality.clone(),
                cones,
            },
            map,
        )
    }

    pub fn weights(&self) -> Vec<BigRational> {
        self.cones.iter().map(|c| c.weight.clone()).collect()
    }

    /// Codimension-one faces of the maximal cones, grouped by ray set.
    pub(crate) fn ridges(&self) -> Result<Vec<Ridge>, TropicalError> {
        let mut groups: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        let l = self.lineality.len();
        for (ci, c) in self.cones.iter().enumerate() {
            if c.rays.is_empty() {
                continue;
            }
            if self.cone_dim(&c.rays) == l + c.rays.len() {
                for (k, &out) in c.rays.iter().enumerate() {
                    let mut f = c.rays.clone();
                    f.remove(k);
                    groups.entry(f).or_default().push((ci, out));
                }
            } else {
                if l > 0 {
                    return Err(TropicalError::NotSimplicial);
                }
                let faces = cone_faces(&self.rays, &c.rays)
                    .map_err(|_| TropicalError::Malformed("cone is not pointed".into()))?;
                let k = faces.len() - 1;
                for f in &faces[k - 1] {
                    let out = *c.rays.iter().find(|r| !f.rays.contains(r)).unwrap();
                    groups.entry(f.rays.clone()).or_default().push((ci, out));
                }
            }
        }
        Ok(groups.into_iter().map(|(rays, cofaces)| Ridge { rays, cofaces }).collect())
    }
}

/// Piecewise-linear function on a simplicial fan: one value per ray, zero on
/// the lineality space, extended linearly on each cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    pub values: Vec<BigRational>,
}

impl PLFunction {
    pub fn new(values: Vec<BigRational>) -> Self {
        PLFunction { values }
    }

    /// Indicator of ray `i` among `n` rays.
    pub fn indicator(n: usize, i: usize) -> Self {
        let mut values = vec![BigRational::zero(); n];
        values[i] = BigRational::from_integer(BigInt::from(1));
        PLFunction { values }
    }

    /// The restriction of a global linear function `x ↦ ⟨a, x⟩`.
    pub fn linear(rays: &[IntVec], a: &[BigRational]) -> Self {
        PLFunction { values: rays.iter().map(|r| crate::ratlin::vector::dot(a, &to_rational(r))).collect() }
    }

    /// Value at `v`, which must lie in the span of the given simplicial cone.
    pub fn eval_on_cone(&self, fan: &WeightedFan, rays: &[usize], v: &[BigRational]) -> Option<BigRational> {
        let x = fan.cone_coordinates(rays, v)?;
        Some(rays.iter().enumerate().fold(BigRational::zero(), |acc, (k, &r)| acc + &x[k] * &self.values[r]))
    }
}
