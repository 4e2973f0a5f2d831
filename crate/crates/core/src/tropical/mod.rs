//! Weighted fans, balancing, and intersections with piecewise-linear functions.

mod fan;

pub use fan::{PLFunction, WeightedCone, WeightedFan};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::polyhedra::Fan;
use crate::ratlin::vector::to_rational;
use crate::ratlin::{
    integer_kernel_basis, integer_rank, quotient_generator_saturated, rref, saturation, Matrix, RatlinError,
};
use crate::{IntMatrix, IntVec, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TropicalError {
    #[error("fan is not pure-dimensional")]
    NotPure,
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("fan is not balanced at the face with rays {face:?}")]
    NotBalanced { face: Vec<usize> },
    #[error("degree needs a zero-dimensional cycle, got dimension {0}")]
    NotZeroDimensional(usize),
    #[error("fan is not complete")]
    NotComplete,
    #[error("malformed fan: {0}")]
    Malformed(String),
    #[error(transparent)]
    Ratlin(#[from] RatlinError),
}

/// Balancing defect at one codimension-one face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancingEntry {
    pub face: Vec<usize>,
    /// `Σ w_σ u_{σ/τ}` reduced modulo the span of the face.
    pub defect: RatVec,
}

impl BalancingEntry {
    pub fn is_balanced(&self) -> bool {
        self.defect.iter().all(|x| x.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancingReport {
    pub entries: Vec<BalancingEntry>,
}

impl BalancingReport {
    pub fn is_balanced(&self) -> bool {
        self.entries.iter().all(|e| e.is_balanced())
    }

    pub fn failures(&self) -> impl Iterator<Item = &BalancingEntry> {
        self.entries.iter().filter(|e| !e.is_balanced())
    }
}

/// Saturated lattices of cone spans, computed once per cone.
struct Lattices<'a> {
    fan: &'a WeightedFan,
    cache: HashMap<Vec<usize>, IntMatrix>,
}

impl<'a> Lattices<'a> {
    fn new(fan: &'a WeightedFan) -> Self {
        Lattices { fan, cache: HashMap::new() }
    }

    fn saturated(&mut self, rays: &[usize]) -> &IntMatrix {
        let fan = self.fan;
        self.cache.entry(rays.to_vec()).or_insert_with(|| saturation(&fan.span_rows(rays)))
    }

    /// Primitive normal vector of `σ` relative to its facet `τ`.
    fn normal_vector(&mut self, sigma: &[usize], tau: &[usize], out: usize) -> Result<IntVec, TropicalError> {
        let w = to_rational(&self.fan.rays[out]);
        let bs = self.saturated(sigma).clone();
        let bt = self.saturated(tau);
        Ok(quotient_generator_saturated(&bs, bt, &w)?)
    }
}

/// Canonical representative of `v` modulo the rational span of the rows:
/// zero in every pivot coordinate of the reduced row echelon form.
fn reduce_mod_span(v: &[BigRational], span: &[RatVec], n: usize) -> RatVec {
    let mut out = v.to_vec();
    if span.is_empty() {
        return out;
    }
    let (r, pivots) = rref(&Matrix::from_rows(span, n));
    for (i, &p) in pivots.iter().enumerate() {
        if out[p].is_zero() {
            continue;
        }
        let c = out[p].clone();
        for j in 0..n {
            out[j] -= &c * &r[(i, j)];
        }
    }
    out
}

fn span_vectors(f: &WeightedFan, rays: &[usize]) -> Vec<RatVec> {
    f.lineality.iter().chain(rays.iter().map(|&r| &f.rays[r])).map(|v| to_rational(v)).collect()
}

/// Checks the balancing condition at every codimension-one face.
pub fn check_balancing(f: &WeightedFan) -> Result<BalancingReport, TropicalError> {
    f.pure_dim()?;
    let n = f.ambient_dim;
    let mut entries = Vec::new();
    let mut lattices = Lattices::new(f);
    // Sums are accumulated over the common denominator of the weights.
    let den = f.cones.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.weight.denom()));
    let scaled: Vec<BigInt> =
        f.cones.iter().map(|c| (&c.weight * BigRational::from_integer(den.clone())).to_integer()).collect();
    for ridge in f.ridges()? {
        let mut acc = vec![BigInt::zero(); n];
        for &(ci, out) in &ridge.cofaces {
            let u = lattices.normal_vector(&f.cones[ci].rays, &ridge.rays, out)?;
            for j in 0..n {
                acc[j] += &scaled[ci] * &u[j];
            }
        }
        let sum: RatVec = acc.into_iter().map(|x| BigRational::new(x, den.clone())).collect();
        let defect = reduce_mod_span(&sum, &span_vectors(f, &ridge.rays), n);
        entries.push(BalancingEntry { face: ridge.rays, defect });
    }
    Ok(BalancingReport { entries })
}

/// Intersection `φ · f` of a balanced simplicial fan with a piecewise-linear
/// function. The result has dimension one less, keeps the ray table of `f`,
/// and carries the weights
/// `w(τ) = Σ_{σ ⊃ τ} w_σ φ_σ(v_{σ/τ}) − φ_τ(Σ_{σ ⊃ τ} w_σ v_{σ/τ})`.
pub fn divisor_intersect(phi: &PLFunction, f: &WeightedFan) -> Result<WeightedFan, TropicalError> {
    intersect_impl(phi, f, None::<&mut rand::rngs::ThreadRng>)
}

/// [`divisor_intersect`] with every normal vector shifted by a random lattice
/// vector of the face it is normal to. Weights must not change.
pub fn divisor_intersect_shifted<R: Rng>(
    phi: &PLFunction,
    f: &WeightedFan,
    rng: &mut R,
) -> Result<WeightedFan, TropicalError> {
    intersect_impl(phi, f, Some(rng))
}

fn intersect_impl<R: Rng>(
    phi: &PLFunction,
    f: &WeightedFan,
    mut rng: Option<&mut R>,
) -> Result<WeightedFan, TropicalError> {
    if phi.values.len() != f.rays.len() {
        return Err(TropicalError::Malformed("function has the wrong number of values".into()));
    }
    if !f.is_simplicial() {
        return Err(TropicalError::NotSimplicial);
    }
    let n = f.ambient_dim;
    let mut cones = Vec::new();
    let mut lattices = Lattices::new(f);
    for ridge in f.ridges()? {
        let shift_basis = lattices.saturated(&ridge.rays).clone();
        let mut first = BigRational::zero();
        let mut sum = vec![BigRational::zero(); n];
        for &(ci, out) in &ridge.cofaces {
            let c = &f.cones[ci];
            let mut u = to_rational(&lattices.normal_vector(&c.rays, &ridge.rays, out)?);
            if let Some(rng) = rng.as_deref_mut() {
                for i in 0..shift_basis.rows() {
                    let k = BigRational::from_integer(BigInt::from(rng.random_range(-3i64..=3)));
                    for j in 0..n {
                        u[j] += &k * BigRational::from_integer(shift_basis[(i, j)].clone());
                    }
                }
            }
            let val = phi.eval_on_cone(f, &c.rays, &u).expect("normal vector lies in its cone's span");
            first += &c.weight * val;
            for j in 0..n {
                sum[j] += &c.weight * &u[j];
            }
        }
        let second = phi
            .eval_on_cone(f, &ridge.rays, &sum)
            .ok_or_else(|| TropicalError::NotBalanced { face: ridge.rays.clone() })?;
        let w = first - second;
        if !w.is_zero() {
            cones.push(WeightedCone { rays: ridge.rays, weight: w });
        }
    }
    Ok(WeightedFan {
        ambient_dim: n,
        dim: f.dim.saturating_sub(1),
        rays: f.rays.clone(),
        lineality: f.lineality.clone(),
        cones,
    })
}

/// Sum of weights of a zero-dimensional cycle.
pub fn degree(f: &WeightedFan) -> Result<BigRational, TropicalError> {
    if f.dim != 0 {
        return Err(TropicalError::NotZeroDimensional(f.dim));
    }
    Ok(f.cones.iter().map(|c| c.weight.clone()).sum())
}

/// The complete fan `fan` as a cycle with all top-dimensional weights one.
pub fn fundamental_cycle(fan: &Fan) -> Result<WeightedFan, TropicalError> {
    if !fan.is_simplicial() {
        return Err(TropicalError::NotSimplicial);
    }
    let d = fan.dim();
    if d != fan.ambient_dim {
        return Err(TropicalError::NotComplete);
    }
    let one = BigRational::from_integer(BigInt::from(1));
    let cones =
        fan.maximal_cones().iter().map(|c| WeightedCone { rays: c.rays.clone(), weight: one.clone() }).collect();
    WeightedFan::new(fan.ambient_dim, d, fan.rays.clone(), Vec::new(), cones)
}

/// Weights of `φ^r · [fan]` for a complete simplicial fan.
pub fn divisor_power_weight(phi: &PLFunction, fan: &Fan, r: usize) -> Result<WeightedFan, TropicalError> {
    let mut cur = fundamental_cycle(fan)?;
    if !check_balancing(&cur)?.is_balanced() {
        return Err(TropicalError::NotComplete);
    }
    for _ in 0..r {
        cur = divisor_intersect(phi, &cur)?;
    }
    Ok(cur)
}

/// `f × ℝᵐ`: the new coordinates come first and are added to the lineality space.
pub fn product_with_lineality(f: &WeightedFan, m: usize) -> WeightedFan {
    let pad = |v: &IntVec| -> IntVec {
        let mut out = vec![BigInt::zero(); m];
        out.extend(v.iter().cloned());
        out
    };
    let mut lineality: Vec<IntVec> = (0..m)
        .map(|i| {
            let mut e = vec![BigInt::zero(); m + f.ambient_dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    lineality.extend(f.lineality.iter().map(pad));
    WeightedFan {
        ambient_dim: m + f.ambient_dim,
        dim: m + f.dim,
        rays: f.rays.iter().map(pad).collect(),
        lineality,
        cones: f.cones.clone(),
    }
}

/// The space of weight vectors (indexed like `f.cones`) balancing the support of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpace {
    pub basis: Vec<RatVec>,
    /// The rays in use together with the lineality space span the ambient space.
    pub spanning: bool,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// One-dimensional, nowhere-vanishing, and spanning.
    pub fn strongly_extremal(&self) -> bool {
        self.spanning && self.basis.len() == 1 && self.basis[0].iter().all(|x| !x.is_zero())
    }
}

/// Kernel of the linear balancing conditions on the weights of the cones of `f`.
pub fn balancing_weight_space(f: &WeightedFan) -> Result<WeightSpace, TropicalError> {
    f.pure_dim()?;
    let n = f.ambient_dim;
    let nc = f.cones.len();
    // Everything here is integral: annihilators of the face spans are taken
    // as integer kernels, and normal vectors are lattice vectors.
    let mut rows: Vec<IntVec> = Vec::new();
    let mut lattices = Lattices::new(f);
    for ridge in f.ridges()? {
        let span = f.span_rows(&ridge.rays);
        let annihilator: Vec<IntVec> = if span.rows() == 0 {
            (0..n)
                .map(|i| {
                    let mut e = vec![BigInt::zero(); n];
                    e[i] = BigInt::one();
                    e
                })
                .collect()
        } else {
            integer_kernel_basis(&span)
        };
        let us: Vec<(usize, IntVec)> = ridge
            .cofaces
            .iter()
            .map(|&(ci, out)| lattices.normal_vector(&f.cones[ci].rays, &ridge.rays, out).map(|u| (ci, u)))
            .collect::<Result<_, _>>()?;
        for a in &annihilator {
            let mut row = vec![BigInt::zero(); nc];
            for (ci, u) in &us {
                row[*ci] += a.iter().zip(u).map(|(x, y)| x * y).sum::<BigInt>();
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let basis = if rows.is_empty() {
        (0..nc)
            .map(|i| {
                let mut e = vec![BigRational::zero(); nc];
                e[i] = BigRational::one();
                e
            })
            .collect()
    } else {
        integer_kernel_basis(&Matrix::from_rows(&rows, nc)).iter().map(|v| to_rational(v)).collect()
    };
    let mut used = vec![false; f.rays.len()];
    f.cones.iter().flat_map(|c| &c.rays).for_each(|&r| used[r] = true);
    let all: Vec<IntVec> = f
        .lineality
        .iter()
        .chain(f.rays.iter().enumerate().filter(|(i, _)| used[*i]).map(|(_, r)| r))
        .cloned()
        .collect();
    let spanning = !all.is_empty() && integer_rank(&Matrix::from_rows(&all, n)) == n;
    Ok(WeightSpace { basis, spanning })
}

#[cfg(test)]
mod tests;
