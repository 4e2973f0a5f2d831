use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polyhedra::{cayley_polytope, face_fan, triangulate_fan, CayleyPolytope, Fan, FlagPair, Polytope};
use crate::ratlin::vector::{gcd_all, int_vec};
use crate::tropical::{divisor_power_weight, PLFunction, WeightedFan};
use crate::{IntMatrix, IntVec};

use super::cover::{link_graph, Graph};
use super::ConstructionError;

/// Length of the circuit vectors relative to the polygons.
const CIRCUIT_SCALE: i64 = 5;

/// Knobs for [`build_base`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseOptions {
    /// Attempts at drawing generic polygons.
    pub max_retries: usize,
    /// Use identical polygons in the first attempt (exercises the retry path).
    pub degenerate_first: bool,
}

impl Default for BaseOptions {
    fn default() -> Self {
        BaseOptions { max_retries: 64, degenerate_first: false }
    }
}

/// The 2-dimensional fan `F` together with everything it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseInstance {
    pub n: usize,
    pub seed: u64,
    pub flags: FlagPair,
    pub circuit: Vec<IntVec>,
    /// Involution on polygon indices matching mirrored pairs.
    pub pairing: Vec<usize>,
    pub polygons: Vec<Vec<IntVec>>,
    /// Unimodular involution `T` preserving the Cayley polytope, `L` and `I⁺`.
    pub symmetry: IntMatrix,
    pub cayley: CayleyPolytope,
    /// The polar of the Cayley polytope, whose normal fan is the face fan of the latter.
    pub polar: Polytope,
    /// Triangulated face fan of the Cayley polytope.
    pub sigma_prime: Fan,
    /// Support function of `polar` on the rays of `sigma_prime`.
    pub support: PLFunction,
    /// `support^{n-2} · μ`, compacted to the rays it uses.
    pub f: WeightedFan,
    /// Cayley vertex under each ray of `f`.
    pub ray_vertex: Vec<usize>,
    /// `T` acting on the rays of `f`.
    pub ray_symmetry: Vec<usize>,
    /// Edges of the Cayley polytope whose cone got weight zero.
    pub zero_weight_edges: usize,
    pub genericity_retries: usize,
}

impl BaseInstance {
    pub fn link_graph(&self) -> Graph {
        link_graph(&self.f)
    }
}

fn mirror(p: &[IntVec]) -> Vec<IntVec> {
    p.iter().map(|v| vec![-v[0].clone(), v[1].clone()]).collect()
}

fn cross(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Integer triangle with the origin strictly inside and no vertex on `x₁ = 0`.
fn random_triangle(rng: &mut ChaCha8Rng) -> Vec<IntVec> {
    loop {
        let mut pts = Vec::new();
        while pts.len() < 3 {
            let p = (rng.random_range(-12i64..=12), rng.random_range(-12i64..=12));
            let r2 = p.0 * p.0 + p.1 * p.1;
            if p.0 != 0 && (25..=144).contains(&r2) {
                pts.push(p);
            }
        }
        let s = [cross(pts[0], pts[1]), cross(pts[1], pts[2]), cross(pts[2], pts[0])];
        if s.iter().all(|&x| x > 0) || s.iter().all(|&x| x < 0) {
            return pts.iter().map(|&(x, y)| int_vec(&[x, y])).collect();
        }
    }
}

/// Pentagon whose vertices sit near angles `36° + 72°k`, so that its edge
/// normals interleave with those of its mirror image.
fn random_pentagon(rng: &mut ChaCha8Rng) -> Vec<IntVec> {
    const DIRS: [(i64, i64); 5] = [(8, 6), (-3, 10), (-10, 0), (-3, -10), (8, -6)];
    DIRS.iter().map(|&(x, y)| int_vec(&[x + rng.random_range(-1i64..=1), y + rng.random_range(-1i64..=1)])).collect()
}

/// Mirror-symmetric quadrilateral `(±a, b), (±c, −d)`.
fn random_symmetric_quad(rng: &mut ChaCha8Rng) -> Vec<IntVec> {
    let a = rng.random_range(2i64..=10);
    let b = rng.random_range(2i64..=10);
    let c = rng.random_range(2i64..=10);
    let d = rng.random_range(2i64..=10);
    vec![int_vec(&[a, b]), int_vec(&[-a, b]), int_vec(&[-c, -d]), int_vec(&[c, -d])]
}

/// Pairing `(0 1)(2 3)…` on `m` polygons; an odd one out is fixed.
pub fn polygon_pairing(m: usize) -> Vec<usize> {
    (0..m)
        .map(|i| {
            if i % 2 == 0 {
                if i + 1 < m {
                    i + 1
                } else {
                    i
                }
            } else {
                i - 1
            }
        })
        .collect()
}

/// The circuit `s·u₁, …, s·u_{m−1}, −s·Σuᵢ` in the last `n − 2` coordinates.
pub fn standard_circuit(n: usize) -> Vec<IntVec> {
    let m = n - 1;
    let s = BigInt::from(CIRCUIT_SCALE);
    let mut out = Vec::with_capacity(m);
    for i in 0..m - 1 {
        let mut e = vec![BigInt::zero(); n];
        e[2 + i] = s.clone();
        out.push(e);
    }
    let mut last = vec![BigInt::zero(); n];
    for x in last.iter_mut().skip(2) {
        *x = -s.clone();
    }
    out.push(last);
    out
}

/// `T(x₁, x₂, y) = (−x₁, x₂, S y)` where `S` permutes the circuit by `pairing`.
pub fn symmetry_matrix(n: usize, pairing: &[usize]) -> IntMatrix {
    let m = n - 1;
    let mut t = IntMatrix::zeros(n, n);
    t[(0, 0)] = -BigInt::one();
    t[(1, 1)] = BigInt::one();
    // Column 2+i is the image of u_i, i.e. of e_i / s.
    for i in 0..m - 1 {
        let j = pairing[i];
        if j < m - 1 {
            t[(2 + j, 2 + i)] = BigInt::one();
        } else {
            for r in 0..m - 1 {
                t[(2 + r, 2 + i)] = -BigInt::one();
            }
        }
    }
    t
}

fn apply(t: &IntMatrix, v: &[BigInt]) -> IntVec {
    t.mul_vec(v)
}

/// Draws polygons until the Cayley polytope is generic, then computes
/// `F = φ_P^{n−2} · μ` on the triangulated face fan.
pub fn build_base(n: usize, seed: u64, options: &BaseOptions) -> Result<BaseInstance, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::DimensionBound { n, needed: 3 });
    }
    let m = n - 1;
    let circuit = standard_circuit(n);
    let pairing = polygon_pairing(m);
    let symmetry = symmetry_matrix(n, &pairing);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for attempt in 0..options.max_retries {
        let polygons: Vec<Vec<IntVec>> = if attempt == 0 && options.degenerate_first {
            let q = random_symmetric_quad(&mut rng);
            vec![q; m]
        } else {
            let mut ps: Vec<Option<Vec<IntVec>>> = vec![None; m];
            for i in 0..m {
                if ps[i].is_some() {
                    continue;
                }
                let j = pairing[i];
                if j == i {
                    ps[i] = Some(random_symmetric_quad(&mut rng));
                } else {
                    let p = if n == 3 { random_pentagon(&mut rng) } else { random_triangle(&mut rng) };
                    ps[j] = Some(mirror(&p));
                    ps[i] = Some(p);
                }
            }
            ps.into_iter().map(|p| p.unwrap()).collect()
        };
        let cayley = match cayley_polytope(&polygons, &circuit) {
            Ok(c) => c,
            Err(crate::polyhedra::PolyhedraError::PolygonNotPlanar(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        if !cayley.is_generic() {
            continue;
        }
        let c = &cayley.polytope;
        if c.vertices.len() != polygons.iter().map(|p| p.len()).sum::<usize>() {
            // A polygon point fell inside the hull; keep instances clean.
            continue;
        }
        let fan = face_fan(c)?;
        let sigma_prime = triangulate_fan(&fan);
        let support = PLFunction::new(
            c.vertices
                .iter()
                .map(|v| {
                    let num: Vec<BigInt> = v.iter().map(|x| x.to_integer()).collect();
                    BigRational::new(BigInt::one(), gcd_all(&num))
                })
                .collect(),
        );
        let full = divisor_power_weight(&support, &sigma_prime, n - 2)?;
        if full.cones.iter().any(|c| c.weight.is_negative()) {
            return Err(ConstructionError::Invariant("negative weight on a 2-cone".into()));
        }
        let (f, map) = full.compact();
        let mut ray_vertex = vec![0; f.rays.len()];
        for (old, new) in map.iter().enumerate() {
            if let Some(k) = new {
                ray_vertex[*k] = old;
            }
        }
        if n == 3 && !is_antiprism(&link_graph(&f), polygons[0].len()) {
            continue;
        }
        let ray_symmetry: Vec<usize> = f
            .rays
            .iter()
            .map(|r| {
                let tr = apply(&symmetry, r);
                f.rays
                    .iter()
                    .position(|s| *s == tr)
                    .ok_or_else(|| ConstructionError::Invariant("symmetry does not preserve the fan".into()))
            })
            .collect::<Result<_, _>>()?;
        let n_edges = c.faces.get(1).map(|l| l.len()).unwrap_or(0);
        let polar = c.polar()?;
        return Ok(BaseInstance {
            n,
            seed,
            flags: FlagPair::coordinate(n),
            circuit,
            pairing,
            polygons,
            symmetry,
            zero_weight_edges: n_edges - f.cones.len(),
            cayley,
            polar,
            sigma_prime,
            support,
            f,
            ray_vertex,
            ray_symmetry,
            genericity_retries: attempt,
        });
    }
    Err(ConstructionError::RetriesExhausted { stage: "genericity", attempts: options.max_retries })
}

/// Whether `g` is the 1-skeleton of the `k`-gonal antiprism: vertices
/// `0..2k` arranged so that `i ~ i+1 (mod k)` on each ring and `i ~ k+i, k+i+1`.
/// Decided by backtracking over vertex correspondences.
pub fn is_antiprism(g: &Graph, k: usize) -> bool {
    let nv = 2 * k;
    if g.n_vertices != nv || g.edges.len() != 4 * k {
        return false;
    }
    let mut target = vec![vec![false; nv]; nv];
    for i in 0..k {
        for (a, b) in [(i, (i + 1) % k), (k + i, k + (i + 1) % k), (i, k + i), (i, k + (i + 1) % k)] {
            target[a][b] = true;
            target[b][a] = true;
        }
    }
    let mut adj = vec![vec![false; nv]; nv];
    for &(a, b) in &g.edges {
        if a == b || adj[a][b] {
            return false;
        }
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut assign = vec![usize::MAX; nv];
    let mut used = vec![false; nv];
    fn extend(
        v: usize,
        nv: usize,
        adj: &[Vec<bool>],
        target: &[Vec<bool>],
        assign: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if v == nv {
            return true;
        }
        for t in 0..nv {
            if used[t] {
                continue;
            }
            if (0..v).all(|u| adj[v][u] == target[t][assign[u]]) {
                assign[v] = t;
                used[t] = true;
                if extend(v + 1, nv, adj, target, assign, used) {
                    return true;
                }
                used[t] = false;
            }
        }
        false
    }
    extend(0, nv, &adj, &target, &mut assign, &mut used)
}

impl From<crate::polyhedra::PolyhedraError> for ConstructionError {
    fn from(e: crate::polyhedra::PolyhedraError) -> Self {
        ConstructionError::Polyhedra(e)
    }
}
