use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lp::{LinearProgram, Relation};
use crate::polyhedra::FlagPair;
use crate::ratlin::vector::{primitive, primitive_of_rational};
use crate::ratlin::{integer_kernel_basis, integer_rank, lattice_index, Matrix};
use crate::tropical::{balancing_weight_space, check_balancing, WeightedCone, WeightedFan};
use crate::{IntMatrix, IntVec, RatVec};

use super::cover::{crossing_flags, CoverEdge, CoverGraph, Graph};
use super::ConstructionError;

/// A linear involution of the ambient space together with the induced
/// involution on cover vertices (`rays[map[v]] = matrix · rays[v]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSymmetry {
    pub matrix: IntMatrix,
    pub vertex_map: Vec<usize>,
}

impl CoverSymmetry {
    pub fn identity(n: usize, n_vertices: usize) -> Self {
        CoverSymmetry { matrix: IntMatrix::identity(n), vertex_map: (0..n_vertices).collect() }
    }

    /// Lifts an involution `t` of the base graph to `a ↦ (ta)′`, `a′ ↦ ta`.
    pub fn swap_sheets(matrix: IntMatrix, base_map: &[usize]) -> Self {
        let v = base_map.len();
        let vertex_map = (0..2 * v).map(|x| if x < v { base_map[x] + v } else { base_map[x - v] }).collect();
        CoverSymmetry { matrix, vertex_map }
    }
}

/// Perturbation schedule: ray `a` moves to `primitive(D·2ʲ·r_a + y_a)` with
/// `y_a` uniform in `[−max_offset, max_offset]ⁿ`; level `j` runs
/// `tries_per_level` attempts before halving the relative step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbParams {
    pub denominator: u64,
    pub levels: usize,
    pub tries_per_level: usize,
    pub max_offset: i64,
    /// Reject candidates whose support loses the connected-cover / two-piece cut.
    pub require_cut_witness: bool,
}

impl Default for PerturbParams {
    fn default() -> Self {
        PerturbParams { denominator: 16, levels: 4, tries_per_level: 8, max_offset: 3, require_cut_witness: true }
    }
}

/// Why individual attempts were rejected.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RejectionCounts {
    pub transversality: usize,
    pub not_positive: usize,
    pub reduction_stuck: usize,
    pub witness_lost: usize,
    pub not_embedded: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    /// The rebalanced fan, compacted to the rays in use, with primitive integer weights.
    pub fan: WeightedFan,
    /// Cover vertex behind each ray of `fan`.
    pub cover_vertex: Vec<usize>,
    /// The cover with perturbed rays, restricted to the edges of the support.
    pub cover: CoverGraph,
    pub attempts: usize,
    pub level: usize,
    /// Dimension of the balancing space on the full perturbed cover.
    pub initial_kernel_dim: usize,
    /// Number of support-reduction steps taken.
    pub reductions: usize,
    pub rejections: RejectionCounts,
}

/// Balancing system in the weights `c_e` of `Σ c_e r_u ∈ span(r_v)` at every
/// vertex `v`, for non-primitive edge generators. Rows
/// `r_v[p]·x[i] − r_v[i]·x[p]` with `p` the first nonzero coordinate of `r_v`.
pub(crate) fn c_balancing_matrix(rays: &[IntVec], edges: &[(usize, usize)], n: usize) -> IntMatrix {
    let nv = rays.len();
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (e, &(a, b)) in edges.iter().enumerate() {
        incident[a].push((e, b));
        incident[b].push((e, a));
    }
    let mut rows = Vec::new();
    for v in 0..nv {
        if incident[v].is_empty() {
            continue;
        }
        let r = &rays[v];
        let p = r.iter().position(|x| !x.is_zero()).expect("rays are nonzero");
        for i in 0..n {
            if i == p {
                continue;
            }
            let mut row = vec![BigInt::zero(); edges.len()];
            for &(e, u) in &incident[v] {
                row[e] += &rays[u][i] * &r[p] - &rays[u][p] * &r[i];
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(&rows, edges.len())
}

fn int_kernel(m: &IntMatrix) -> Vec<IntVec> {
    if m.rows() == 0 {
        return (0..m.cols())
            .map(|i| {
                let mut e = vec![BigInt::zero(); m.cols()];
                e[i] = BigInt::one();
                e
            })
            .collect();
    }
    integer_kernel_basis(m)
}

/// Elements of the span of `kernel` vanishing outside `support`.
fn restrict_kernel(kernel: &[IntVec], support: &[bool]) -> Vec<IntVec> {
    let d = kernel.len();
    let off: Vec<IntVec> =
        (0..support.len()).filter(|&i| !support[i]).map(|i| kernel.iter().map(|k| k[i].clone()).collect()).collect();
    int_kernel(&Matrix::from_rows(&off, d))
        .iter()
        .map(|a| {
            let mut v = vec![BigInt::zero(); support.len()];
            for (ak, k) in a.iter().zip(kernel) {
                if ak.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(k) {
                    *x += ak * y;
                }
            }
            primitive(&v)
        })
        .collect()
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Whether `a` is a rational multiple of the nonzero vector `b`.
fn proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    let p = b.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    a.iter().zip(b).all(|(x, y)| x * &b[p] == y * &a[p])
}

/// Primitive integer vector on the ray through the orthogonal projection of
/// `x` onto the span of the independent vectors `basis`.
fn project_direction(basis: &[IntVec], x: &[BigInt]) -> IntVec {
    let k = basis.len();
    // Gram · coef = rhs, solved as the kernel of `[Gram | −rhs]`.
    let rows: Vec<IntVec> = (0..k)
        .map(|i| {
            let mut row: IntVec = (0..k).map(|j| dot_int(&basis[i], &basis[j])).collect();
            row.push(-dot_int(&basis[i], x));
            row
        })
        .collect();
    let ker = integer_kernel_basis(&Matrix::from_rows(&rows, k + 1));
    assert_eq!(ker.len(), 1, "kernel basis is independent");
    let mut coef = ker[0].clone();
    if coef[k].is_negative() {
        coef.iter_mut().for_each(|c| *c = -c.clone());
    }
    let mut out = vec![BigInt::zero(); x.len()];
    for (c, b) in coef.iter().zip(basis) {
        for (o, v) in out.iter_mut().zip(b) {
            *o += c * v;
        }
    }
    primitive(&out)
}

/// Whether two 2-cones meet outside their common face.
pub(crate) fn cones_overlap(rays: &[IntVec], e: (usize, usize), f: (usize, usize)) -> bool {
    let first = [e.0, e.1];
    let second = [f.0, f.1];
    let mut distinct: Vec<usize> = first.iter().chain(&second).copied().collect();
    distinct.sort_unstable();
    distinct.dedup();
    let n = rays[0].len();
    let rows: Vec<IntVec> = distinct.iter().map(|&v| rays[v].clone()).collect();
    if integer_rank(&Matrix::from_rows(&rows, n)) == distinct.len() {
        return false;
    }
    // α·first − β·second = 0 with unit mass off the shared rays.
    let mut lp = LinearProgram::new();
    let a: Vec<usize> = (0..2).map(|_| lp.nonneg()).collect();
    let b: Vec<usize> = (0..2).map(|_| lp.nonneg()).collect();
    for j in 0..n {
        let mut coeffs = Vec::new();
        for k in 0..2 {
            coeffs.push((a[k], BigRational::from_integer(rays[first[k]][j].clone())));
            coeffs.push((b[k], -BigRational::from_integer(rays[second[k]][j].clone())));
        }
        lp.constrain(&coeffs, Relation::Eq, BigRational::zero());
    }
    let mut mass = Vec::new();
    for k in 0..2 {
        if !second.contains(&first[k]) {
            mass.push((a[k], BigRational::one()));
        }
        if !first.contains(&second[k]) {
            mass.push((b[k], BigRational::one()));
        }
    }
    lp.constrain(&mass, Relation::Eq, BigRational::one());
    lp.solve().is_feasible()
}

fn is_embedded(rays: &[IntVec], edges: &[(usize, usize)], used: &[usize]) -> bool {
    for i in 0..used.len() {
        for j in i + 1..used.len() {
            if rays[used[i]] == rays[used[j]] {
                return false;
            }
        }
    }
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if cones_overlap(rays, edges[i], edges[j]) {
                return false;
            }
        }
    }
    true
}

fn spans(rays: &[IntVec], used: &[usize], n: usize) -> bool {
    let rows: Vec<IntVec> = used.iter().map(|&v| rays[v].clone()).collect();
    !rows.is_empty() && integer_rank(&Matrix::from_rows(&rows, n)) == n
}

fn used_vertices(edges: &[(usize, usize)], nv: usize) -> Vec<usize> {
    let mut used = vec![false; nv];
    for &(a, b) in edges {
        used[a] = true;
        used[b] = true;
    }
    (0..nv).filter(|&v| used[v]).collect()
}

/// Connected cover whose cut graph has exactly two components, both counted
/// on the vertices that carry edges.
fn has_cut_witness(nv: usize, edges: &[(usize, usize)], crossing: &[bool]) -> bool {
    let g = Graph::new(nv, edges.to_vec());
    let deg = g.degrees();
    let active: Vec<usize> = (0..nv).filter(|&v| deg[v] > 0).collect();
    let count = |g: &Graph| {
        let labels = g.component_labels();
        let mut seen: Vec<usize> = active.iter().map(|&v| labels[v]).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };
    let cut = g.edge_subgraph(|i| !crossing[i]);
    count(&g) == 1 && count(&cut) == 2
}

/// Lattice index of the pair `r_a, r_b`; a 2-cone with non-primitive
/// generators carries lattice weight `c · index`.
fn pair_index(rays: &[IntVec], a: usize, b: usize) -> BigInt {
    lattice_index(&Matrix::from_rows(&[rays[a].clone(), rays[b].clone()], rays[a].len()))
}

enum Outcome {
    Accepted(Box<Perturbation>),
    Rejected,
}

/// Moves the cover into general position and solves for balancing weights.
///
/// Perturbations are drawn on one vertex per symmetry orbit and transported by
/// the symmetry, so the perturbed cover and its balancing space stay
/// symmetric. Starting from the projection of the unperturbed weights onto
/// the balancing space, the support is shrunk along symmetric balancing
/// directions until the weights are unique up to scale. A candidate is
/// accepted when the weights are strictly positive, the support spans the
/// ambient space, the cones meet only along common faces and (optionally)
/// the cover witness survives.
pub fn perturb_and_rebalance(
    cover: &CoverGraph,
    symmetry: &CoverSymmetry,
    flags: &FlagPair,
    params: &PerturbParams,
    seed: u64,
) -> Result<Perturbation, ConstructionError> {
    let n = cover.rays.first().map(|r| r.len()).unwrap_or(0);
    if n < 4 {
        return Err(ConstructionError::DimensionBound { n, needed: 4 });
    }
    let nv = cover.n_vertices();
    let edges: Vec<(usize, usize)> = cover.edges.iter().map(|e| e.ends).collect();
    let crossing: Vec<bool> = cover.edges.iter().map(|e| e.crossing).collect();

    // Unperturbed weights in c-coordinates.
    let c_star: RatVec = cover
        .edges
        .iter()
        .map(|e| &e.weight / BigRational::from_integer(pair_index(&cover.rays, e.ends.0, e.ends.1)))
        .collect();
    let c_star = primitive_of_rational(&c_star);

    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let edge_index: HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(i, &(a, b))| (key(a, b), i)).collect();
    let edge_perm: Vec<usize> = edges
        .iter()
        .map(|&(a, b)| {
            edge_index
                .get(&key(symmetry.vertex_map[a], symmetry.vertex_map[b]))
                .copied()
                .ok_or_else(|| ConstructionError::Invariant("symmetry does not preserve the cover".into()))
        })
        .collect::<Result<_, _>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut rejections = RejectionCounts::default();
    let mut attempts = 0;
    for level in 0..params.levels {
        let scale = BigInt::from(params.denominator) << level;
        for _ in 0..params.tries_per_level {
            attempts += 1;
            let mut rays: Vec<IntVec> = cover.rays.clone();
            for v in 0..nv {
                let tv = symmetry.vertex_map[v];
                if tv < v {
                    continue;
                }
                let mut y: IntVec =
                    (0..n).map(|_| BigInt::from(rng.random_range(-params.max_offset..=params.max_offset))).collect();
                if tv == v {
                    let ty = symmetry.matrix.mul_vec(&y);
                    y = y.iter().zip(&ty).map(|(a, b)| a + b).collect();
                }
                let moved: IntVec = cover.rays[v].iter().zip(&y).map(|(r, d)| r * &scale + d).collect();
                if moved.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let p = primitive(&moved);
                rays[tv] = symmetry.matrix.mul_vec(&p);
                rays[v] = p;
            }
            match attempt(
                cover,
                &rays,
                &edges,
                &crossing,
                &c_star,
                &edge_perm,
                flags,
                params,
                &mut rng,
                &mut rejections,
            )? {
                Outcome::Accepted(mut p) => {
                    p.attempts = attempts;
                    p.level = level;
                    p.rejections = rejections;
                    return Ok(*p);
                }
                Outcome::Rejected => {}
            }
        }
    }
    Err(ConstructionError::RetriesExhausted { stage: "perturbation", attempts })
}

#[allow(clippy::too_many_arguments)]
fn attempt(
    cover: &CoverGraph,
    rays: &[IntVec],
    edges: &[(usize, usize)],
    crossing: &[bool],
    c_star: &[BigInt],
    edge_perm: &[usize],
    flags: &FlagPair,
    params: &PerturbParams,
    rng: &mut ChaCha8Rng,
    rejections: &mut RejectionCounts,
) -> Result<Outcome, ConstructionError> {
    let n = rays[0].len();
    let nv = rays.len();
    // Transversality and crossing pattern must survive the move.
    if rays.iter().any(|r| flags.l_value(r).is_zero()) {
        rejections.transversality += 1;
        return Ok(Outcome::Rejected);
    }
    let g = Graph::new(nv, edges.to_vec());
    if crossing_flags(&g, rays, flags)? != crossing {
        rejections.transversality += 1;
        return Ok(Outcome::Rejected);
    }

    let kernel = int_kernel(&c_balancing_matrix(rays, edges, n));
    let initial_kernel_dim = kernel.len();
    if kernel.is_empty() {
        rejections.not_positive += 1;
        return Ok(Outcome::Rejected);
    }
    // Weights only matter up to positive scale, so they are kept as
    // primitive integer vectors throughout.
    let mut w = project_direction(&kernel, c_star);
    if w.iter().any(|x| !x.is_positive()) {
        rejections.not_positive += 1;
        return Ok(Outcome::Rejected);
    }

    // Kernels of sub-supports are computed inside the full kernel, which is
    // the same as re-solving the balancing system on the surviving edges.
    let mut support: Vec<usize> = (0..edges.len()).collect();
    let mut reductions = 0;
    loop {
        let mut in_support = vec![false; edges.len()];
        support.iter().for_each(|&i| in_support[i] = true);
        let ker = restrict_kernel(&kernel, &in_support);
        if ker.len() == 1 {
            break;
        }
        // Symmetrized kernel directions; any of them not proportional to the
        // current weights has entries of both signs after a sign choice.
        let dirs: Vec<IntVec> = ker
            .iter()
            .map(|k| {
                let mut s = k.clone();
                for (i, x) in k.iter().enumerate() {
                    s[edge_perm[i]] += x;
                }
                primitive(&s)
            })
            .filter(|s| s.iter().any(|x| !x.is_zero()) && !proportional(s, &w))
            .collect();
        if dirs.is_empty() {
            rejections.reduction_stuck += 1;
            return Ok(Outcome::Rejected);
        }
        let mut d = vec![BigInt::zero(); edges.len()];
        for _ in 0..64 {
            d.iter_mut().for_each(|x| *x = BigInt::zero());
            for dir in &dirs {
                let r = BigInt::from(rng.random_range(-3i64..=3));
                for (a, b) in d.iter_mut().zip(dir) {
                    *a += &r * b;
                }
            }
            if d.iter().any(|x| !x.is_zero()) && !proportional(&d, &w) {
                break;
            }
        }
        if d.iter().all(|x| x.is_zero()) || proportional(&d, &w) {
            d = dirs[0].clone();
        }
        if rng.random_bool(0.5) {
            d.iter_mut().for_each(|x| *x = -x.clone());
        }
        if !d.iter().any(|x| x.is_negative()) {
            d.iter_mut().for_each(|x| *x = -x.clone());
        }
        // Largest step keeping every weight nonnegative.
        let t = support
            .iter()
            .filter(|&&i| d[i].is_negative())
            .map(|&i| BigRational::new(w[i].clone(), -d[i].clone()))
            .min()
            .expect("the direction has a negative entry on the support");
        let next: IntVec = w.iter().zip(&d).map(|(a, b)| a * t.denom() + t.numer() * b).collect();
        w = primitive(&next);
        for i in 0..edges.len() {
            if !in_support[i] || !w[i].is_positive() {
                w[i] = BigInt::zero();
            }
        }
        support.retain(|&i| w[i].is_positive());
        reductions += 1;
        let sub_edges: Vec<(usize, usize)> = support.iter().map(|&i| edges[i]).collect();
        let sub_cross: Vec<bool> = support.iter().map(|&i| crossing[i]).collect();
        let used = used_vertices(&sub_edges, nv);
        if !spans(rays, &used, n) || (params.require_cut_witness && !has_cut_witness(nv, &sub_edges, &sub_cross)) {
            rejections.witness_lost += 1;
            return Ok(Outcome::Rejected);
        }
    }

    let sub_edges: Vec<(usize, usize)> = support.iter().map(|&i| edges[i]).collect();
    let sub_cross: Vec<bool> = support.iter().map(|&i| crossing[i]).collect();
    let used = used_vertices(&sub_edges, nv);
    if !spans(rays, &used, n) || (params.require_cut_witness && !has_cut_witness(nv, &sub_edges, &sub_cross)) {
        rejections.witness_lost += 1;
        return Ok(Outcome::Rejected);
    }
    if !is_embedded(rays, &sub_edges, &used) {
        rejections.not_embedded += 1;
        return Ok(Outcome::Rejected);
    }

    // Lattice weights, scaled to coprime integers.
    let lattice: IntVec = support.iter().map(|&i| &w[i] * pair_index(rays, edges[i].0, edges[i].1)).collect();
    let weights = primitive(&lattice);

    let mut ray_of = vec![usize::MAX; nv];
    for (k, &v) in used.iter().enumerate() {
        ray_of[v] = k;
    }
    let cones: Vec<WeightedCone> = sub_edges
        .iter()
        .zip(&weights)
        .map(|(&(a, b), wt)| WeightedCone {
            rays: vec![ray_of[a], ray_of[b]],
            weight: BigRational::from_integer(wt.clone()),
        })
        .collect();
    let fan = WeightedFan::new(n, 2, used.iter().map(|&v| rays[v].clone()).collect(), vec![], cones)
        .map_err(|e| ConstructionError::Invariant(format!("rebalanced fan is malformed: {e}")))?;

    // Independent certification through the lattice-level routines.
    let space = balancing_weight_space(&fan)?;
    let report = check_balancing(&fan)?;
    if !space.strongly_extremal() || !report.is_balanced() {
        return Err(ConstructionError::Invariant("rebalanced fan fails certification".into()));
    }
    let b = &space.basis[0];
    let ratio = &fan.cones[0].weight / &b[0];
    if fan.cones.iter().zip(b).any(|(c, x)| c.weight != &ratio * x) {
        return Err(ConstructionError::Invariant("weights differ from the balancing space".into()));
    }

    let restricted = CoverGraph {
        base_vertices: cover.base_vertices,
        rays: rays.to_vec(),
        edges: support
            .iter()
            .map(|&i| CoverEdge {
                ends: edges[i],
                crossing: crossing[i],
                source: cover.edges[i].source,
                weight: cover.edges[i].weight.clone(),
            })
            .collect(),
    };
    Ok(Outcome::Accepted(Box::new(Perturbation {
        fan,
        cover_vertex: used,
        cover: restricted,
        attempts: 0,
        level: 0,
        initial_kernel_dim,
        reductions,
        rejections: RejectionCounts::default(),
    })))
}
