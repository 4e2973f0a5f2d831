//! Randomized search for supporting caps, with exact verification.
//!
//! A cap candidate is a box `c + U·t`, `|tᵢ| < δ`, in the affine plane through
//! `c` spanned by the columns of `U`, instead of a round disk. Every condition
//! then becomes a linear program over one cone at a time:
//!
//! - compactness: the closed box meets no cone on its boundary;
//! - nonemptiness: some cone meets the box;
//! - escape: for `0 < ε ≤ ε*`, the closed box translated by `εv` meets no cone.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::ratlin::{integer_rank, Matrix};
use crate::tropical::{WeightedCone, WeightedFan};
use crate::{IntVec, RatVec};

type Q = BigRational;

fn q(x: &BigInt) -> Q {
    Q::from_integer(x.clone())
}

/// A verified supporting cap of the support of a fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cap {
    pub center: RatVec,
    /// Spanning vectors of the plane, one per cap dimension.
    pub basis: Vec<IntVec>,
    /// Half side length of the box in plane coordinates.
    pub radius: Q,
    pub escape: IntVec,
    /// Translations by `εv` with `0 < ε ≤ epsilon` miss the support.
    pub epsilon: Q,
    /// A point of the support inside the cap.
    pub witness: RatVec,
}

/// Search parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapSearch {
    pub cap_dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; the reported cap is the one with the lowest trial index.
    pub threads: usize,
    /// Entries of plane and escape directions are drawn from `[−bound, bound]`.
    pub direction_bound: i64,
}

impl CapSearch {
    pub fn new(cap_dim: usize, trials: usize, seed: u64) -> Self {
        CapSearch { cap_dim, trials, seed, threads: threads_from_env(), direction_bound: 3 }
    }
}

/// `TROPICAP_THREADS`, defaulting to one.
pub fn threads_from_env() -> usize {
    std::env::var("TROPICAP_THREADS").ok().and_then(|s| s.parse().ok()).filter(|&t| t >= 1).unwrap_or(1)
}

struct Plane<'a> {
    center: &'a [Q],
    basis: &'a [IntVec],
    radius: &'a Q,
}

/// Points `Σλᵣ r + Σμ l = c + U t + ε v` with `λ ≥ 0`, `|t| ≤ δ`, and `ε` in
/// `[0, eps]` (fixed at zero when `escape` is `None`). Returns the program
/// and the indices of the `t` variables and of `ε`.
fn cone_program(
    f: &WeightedFan,
    cone: &WeightedCone,
    plane: &Plane,
    escape: Option<(&[BigInt], &Q)>,
) -> (LinearProgram, Vec<usize>, Option<usize>) {
    let n = f.ambient_dim;
    let mut lp = LinearProgram::new();
    let lam: Vec<usize> = cone.rays.iter().map(|_| lp.nonneg()).collect();
    let mu: Vec<usize> = f.lineality.iter().map(|_| lp.free()).collect();
    let t: Vec<usize> =
        plane.basis.iter().map(|_| lp.var(Some(-plane.radius.clone()), Some(plane.radius.clone()))).collect();
    let eps = escape.map(|(_, e)| lp.var(Some(Q::zero()), Some(e.clone())));
    for j in 0..n {
        let mut row: Vec<(usize, Q)> = Vec::new();
        for (k, &r) in cone.rays.iter().enumerate() {
            if !f.rays[r][j].is_zero() {
                row.push((lam[k], q(&f.rays[r][j])));
            }
        }
        for (k, l) in f.lineality.iter().enumerate() {
            if !l[j].is_zero() {
                row.push((mu[k], q(&l[j])));
            }
        }
        for (k, u) in plane.basis.iter().enumerate() {
            if !u[j].is_zero() {
                row.push((t[k], -q(&u[j])));
            }
        }
        if let (Some(e), Some((v, _))) = (eps, escape) {
            if !v[j].is_zero() {
                row.push((e, -q(&v[j])));
            }
        }
        lp.constrain(&row, Relation::Eq, plane.center[j].clone());
    }
    (lp, t, eps)
}

/// Some translate by `ε ∈ (0, eps]` meets the cone.
fn escape_blocked(f: &WeightedFan, cone: &WeightedCone, plane: &Plane, v: &[BigInt], eps: &Q) -> bool {
    let (mut lp, _, e) = cone_program(f, cone, plane, Some((v, eps)));
    lp.maximize(&[(e.expect("escape variable"), Q::one())]);
    match lp.solve() {
        LpOutcome::Infeasible => false,
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Unbounded => true,
    }
}

/// The cone meets the boundary of the closed box.
fn touches_boundary(f: &WeightedFan, cone: &WeightedCone, plane: &Plane) -> bool {
    let (lp, t, _) = cone_program(f, cone, plane, None);
    for &ti in &t {
        for sign in [1, -1] {
            let mut lp = lp.clone();
            lp.maximize(&[(ti, Q::from_integer(BigInt::from(sign)))]);
            match lp.solve() {
                LpOutcome::Infeasible => return false,
                LpOutcome::Optimal { value, .. } => {
                    if &value >= plane.radius {
                        return true;
                    }
                }
                LpOutcome::Unbounded => return true,
            }
        }
    }
    false
}

/// A point of the cone inside the closed box, if any.
fn meeting_point(f: &WeightedFan, cone: &WeightedCone, plane: &Plane) -> Option<RatVec> {
    let (lp, t, _) = cone_program(f, cone, plane, None);
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => {
            let mut p = plane.center.to_vec();
            for (k, u) in plane.basis.iter().enumerate() {
                for j in 0..p.len() {
                    p[j] += &x[t[k]] * q(&u[j]);
                }
            }
            Some(p)
        }
        _ => None,
    }
}

fn point_in_cone(f: &WeightedFan, cone: &WeightedCone, x: &[Q]) -> bool {
    let zero = Q::zero();
    let plane = Plane { center: x, basis: &[], radius: &zero };
    cone_program(f, cone, &plane, None).0.solve().is_feasible()
}

fn plane_dim(basis: &[IntVec]) -> usize {
    if basis.is_empty() {
        return 0;
    }
    let n = basis[0].len();
    integer_rank(&Matrix::from_rows(basis, n))
}

/// Checks the two cap conditions from scratch.
pub fn verify_cap(f: &WeightedFan, cap: &Cap) -> bool {
    let n = f.ambient_dim;
    let k = cap.basis.len();
    if k == 0
        || cap.center.len() != n
        || cap.escape.len() != n
        || cap.witness.len() != n
        || cap.basis.iter().any(|u| u.len() != n)
        || plane_dim(&cap.basis) != k
        || !cap.radius.is_positive()
        || !cap.epsilon.is_positive()
    {
        return false;
    }
    let plane = Plane { center: &cap.center, basis: &cap.basis, radius: &cap.radius };
    // The witness is in the open box and on the support.
    let shifted: Vec<Q> = cap.witness.iter().zip(&cap.center).map(|(w, c)| w - c).collect();
    let cols: Vec<Vec<Q>> = cap.basis.iter().map(|u| u.iter().map(q).collect()).collect();
    let Some(t) = crate::ratlin::solve(&Matrix::from_cols(&cols, n), &shifted) else {
        return false;
    };
    if t.iter().any(|x| x.abs() >= cap.radius) {
        return false;
    }
    if !f.cones.iter().any(|c| point_in_cone(f, c, &cap.witness)) {
        return false;
    }
    f.cones.iter().all(|c| !touches_boundary(f, c, &plane))
        && f.cones.iter().all(|c| !escape_blocked(f, c, &plane, &cap.escape, &cap.epsilon))
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> IntVec {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.random_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return v.into_iter().map(BigInt::from).collect();
        }
    }
}

/// Every face of a simplicial fan as a sorted ray set, the apex included.
fn fan_faces(f: &WeightedFan) -> Vec<Vec<usize>> {
    let mut out = std::collections::BTreeSet::new();
    for c in &f.cones {
        for mask in 0u32..(1 << c.rays.len()) {
            out.insert(
                c.rays.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &r)| r).collect::<Vec<_>>(),
            );
        }
    }
    out.into_iter().collect()
}

/// One candidate: a face of `f`, a point in its relative interior, a random
/// plane through it, a box size, and an escape direction.
fn candidate(f: &WeightedFan, faces: &[Vec<usize>], search: &CapSearch, trial: usize) -> Option<Cap> {
    let n = f.ambient_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    rng.set_stream(trial as u64);
    if f.cones.is_empty() {
        return None;
    }
    let rays = faces[rng.random_range(0..faces.len())].clone();
    let mut center = vec![Q::zero(); n];
    for &r in &rays {
        for j in 0..n {
            center[j] += q(&f.rays[r][j]);
        }
    }
    let basis: Vec<IntVec> =
        (0..search.cap_dim).map(|_| random_direction(&mut rng, n, search.direction_bound)).collect();
    if plane_dim(&basis) != search.cap_dim {
        return None;
    }
    let radius =
        if rays.is_empty() { Q::one() } else { Q::new(BigInt::one(), BigInt::from(1u64 << rng.random_range(2..=4))) };
    let epsilon = &radius / Q::from_integer(BigInt::from(8));
    let escape = random_direction(&mut rng, n, search.direction_bound);
    let plane = Plane { center: &center, basis: &basis, radius: &radius };

    // The star of the face first: that is where a translate is most likely blocked.
    let in_star = |c: &WeightedCone| rays.iter().all(|r| c.rays.contains(r));
    let order: Vec<&WeightedCone> =
        f.cones.iter().filter(|c| in_star(c)).chain(f.cones.iter().filter(|c| !in_star(c))).collect();
    if order.iter().any(|c| escape_blocked(f, c, &plane, &escape, &epsilon)) {
        return None;
    }
    if order.iter().any(|c| touches_boundary(f, c, &plane)) {
        return None;
    }
    let witness = order.iter().find_map(|c| meeting_point(f, c, &plane))?;
    Some(Cap { center, basis, radius, escape, epsilon, witness })
}

/// Runs up to `search.trials` candidates and returns the verified cap with the
/// lowest trial index, together with that index.
pub fn search_caps(f: &WeightedFan, search: &CapSearch) -> Option<(usize, Cap)> {
    if search.cap_dim == 0 || search.cap_dim > f.ambient_dim {
        return None;
    }
    let threads = search.threads.max(1);
    let faces = fan_faces(f);
    let best = AtomicUsize::new(usize::MAX);
    let run = |start: usize| -> Option<(usize, Cap)> {
        let mut trial = start;
        while trial < search.trials && trial < best.load(Ordering::Relaxed) {
            if let Some(cap) = candidate(f, &faces, search, trial) {
                if verify_cap(f, &cap) {
                    best.fetch_min(trial, Ordering::Relaxed);
                    return Some((trial, cap));
                }
            }
            trial += threads;
        }
        None
    };
    if threads == 1 {
        return run(0);
    }
    let found: Vec<(usize, Cap)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads).map(|t| s.spawn(move || run(t))).collect();
        handles.into_iter().filter_map(|h| h.join().expect("cap search worker panicked")).collect()
    });
    found.into_iter().min_by_key(|(i, _)| *i)
}

/// [`search_caps`] with the thread count from the environment.
pub fn find_supporting_cap(f: &WeightedFan, cap_dim: usize, trials: usize, seed: u64) -> Option<Cap> {
    search_caps(f, &CapSearch::new(cap_dim, trials, seed)).map(|(_, c)| c)
}

/// A seeded fan whose support lies in the open half-space `x₁ > 0` apart from
/// the origin, so it cannot be balanced. Even seeds give a few rays in `ℝ²`,
/// odd seeds a path of 2-cones in `ℝ⁴`. Returns the fan and its codimension.
pub fn unbalanced_control(seed: u64) -> (WeightedFan, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, dim, count) =
        if seed.is_multiple_of(2) { (2, 1, rng.random_range(1..=3)) } else { (4, 2, rng.random_range(3..=5)) };
    let mut rays: Vec<IntVec> = Vec::new();
    while rays.len() < count {
        let mut v: Vec<i64> = vec![rng.random_range(1..=4)];
        v.extend((1..n).map(|_| rng.random_range(-4i64..=4)));
        let r = crate::ratlin::vector::primitive(&v.into_iter().map(BigInt::from).collect::<Vec<_>>());
        if !rays.contains(&r) {
            rays.push(r);
        }
    }
    let one = Q::one();
    let cones: Vec<WeightedCone> = if dim == 1 {
        (0..count).map(|i| WeightedCone { rays: vec![i], weight: one.clone() }).collect()
    } else {
        (0..count - 1).map(|i| WeightedCone { rays: vec![i, i + 1], weight: one.clone() }).collect()
    };
    let f = WeightedFan::new(n, dim, rays, Vec::new(), cones).expect("control fan is well formed");
    (f, n - dim)
}
