//! Certificates: the double-cover witness against `(n−2)`-convexity, graph
//! homology, the Hodge-index violation, and the supporting-cap search.

mod caps;

pub use caps::{find_supporting_cap, search_caps, threads_from_env, unbalanced_control, verify_cap, Cap, CapSearch};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::construction::{CoverGraph, Graph, PipelineState};
use crate::ratlin::{inertia, smith_normal_form, InertiaTriple, RatlinError};
use crate::tropical::{
    balancing_weight_space, check_balancing, degree, divisor_intersect, PLFunction, TropicalError, WeightedFan,
};
use crate::{IntMatrix, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConvexityError {
    #[error("ray tags do not split the rays into two sheets: {0}")]
    BadPartition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Ratlin(#[from] RatlinError),
}

/// Connectivity of the double cover and of what is left after removing the
/// lifts of all crossing edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverWitness {
    pub connected: bool,
    pub cut_components: usize,
}

impl CoverWitness {
    /// A connected cover falling into two pieces: `H̃⁰(X̃) → H̃⁰(X̃ \ L̃⁺)` has a
    /// nontrivial cokernel.
    pub fn is_witness(&self) -> bool {
        self.connected && self.cut_components == 2
    }
}

/// Vertices not touched by any edge are not part of the cover as a space and
/// are ignored. A vertex all of whose edges cross still counts after the cut.
pub fn cover_certificate(cover: &CoverGraph) -> CoverWitness {
    let g = cover.graph();
    let used: Vec<bool> = g.degrees().iter().map(|&d| d > 0).collect();
    let count = |h: &Graph| {
        let labels = h.component_labels();
        let mut seen: Vec<usize> = (0..h.n_vertices).filter(|&v| used[v]).map(|v| labels[v]).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };
    CoverWitness { connected: count(&g) == 1, cut_components: count(&cover.cut_graph()) }
}

/// Betti numbers of a graph as a 1-dimensional complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphHomology {
    pub b0: usize,
    pub b1: usize,
}

/// Computes `b₀` from connected components and `b₁ = E − V + b₀`, and checks
/// both against the rank of the boundary matrix from its Smith form.
pub fn graph_homology(g: &Graph) -> Result<GraphHomology, ConvexityError> {
    let b0 = g.component_count();
    let b1 = g.edges.len() + b0 - g.n_vertices;
    let mut d = IntMatrix::zeros(g.n_vertices, g.edges.len());
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        if a != b {
            d[(a, e)] -= BigInt::from(1);
            d[(b, e)] += BigInt::from(1);
        }
    }
    let snf = smith_normal_form(&d);
    let r = snf.rank();
    if snf.invariant_factors().iter().any(|x| x != &BigInt::from(1)) {
        return Err(ConvexityError::Invariant("graph boundary has torsion".into()));
    }
    if g.n_vertices - r != b0 || g.edges.len() - r != b1 {
        return Err(ConvexityError::Invariant(format!(
            "Smith form gives (b0, b1) = ({}, {}), components give ({b0}, {b1})",
            g.n_vertices - r,
            g.edges.len() - r
        )));
    }
    Ok(GraphHomology { b0, b1 })
}

fn check_surface(f: &WeightedFan) -> Result<(), ConvexityError> {
    if f.dim != 2 || !f.lineality.is_empty() {
        return Err(TropicalError::Malformed("expected a 2-dimensional fan without lineality".into()).into());
    }
    if !f.is_simplicial() {
        return Err(TropicalError::NotSimplicial.into());
    }
    Ok(())
}

/// `deg(φ · ψ · f)` for a balanced simplicial 2-dimensional fan.
pub fn pairing(f: &WeightedFan, phi: &PLFunction, psi: &PLFunction) -> Result<BigRational, ConvexityError> {
    check_surface(f)?;
    let curve = divisor_intersect(psi, f)?;
    Ok(degree(&divisor_intersect(phi, &curve)?)?)
}

/// `m_ij = deg(δ_i · δ_j · f)` with `δ_i` the indicator of ray `i`.
pub fn intersection_matrix(f: &WeightedFan) -> Result<RatMatrix, ConvexityError> {
    check_surface(f)?;
    if !check_balancing(f)?.is_balanced() {
        return Err(TropicalError::NotBalanced { face: Vec::new() }.into());
    }
    let r = f.rays.len();
    let deltas: Vec<PLFunction> = (0..r).map(|i| PLFunction::indicator(r, i)).collect();
    let curves: Vec<WeightedFan> = deltas.iter().map(|d| divisor_intersect(d, f)).collect::<Result<_, _>>()?;
    let mut m = RatMatrix::zeros(r, r);
    for (j, curve) in curves.iter().enumerate() {
        for (i, d) in deltas.iter().enumerate() {
            m[(i, j)] = degree(&divisor_intersect(d, curve)?)?;
        }
    }
    Ok(m)
}

/// The two pulled-back classes and their three pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeWitness {
    /// Values of `ω` on the rays: `ψ` on the first sheet, zero on the second.
    pub omega: Vec<BigRational>,
    pub omega_prime: Vec<BigRational>,
    pub deg_omega_sq: BigRational,
    pub deg_omega_prime_sq: BigRational,
    pub deg_mixed: BigRational,
}

impl HodgeWitness {
    /// The pattern `deg ω² = deg ω′² > 0`, `deg ωω′ = 0`.
    pub fn has_expected_pattern(&self) -> bool {
        self.deg_omega_sq == self.deg_omega_prime_sq && self.deg_omega_sq.is_positive() && self.deg_mixed.is_zero()
    }

    /// The Gram matrix of `ω, ω′` is positive definite.
    pub fn gram_positive_definite(&self) -> bool {
        let a = &self.deg_omega_sq;
        let c = &self.deg_omega_prime_sq;
        let b = &self.deg_mixed;
        a.is_positive() && (a * c - b * b).is_positive()
    }
}

/// `ω` takes the values `psi` on rays with `sheet[r] == 0` and zero on the
/// others; `ω′` the other way round.
pub fn hodge_witness(f: &WeightedFan, sheet: &[usize], psi: &[BigRational]) -> Result<HodgeWitness, ConvexityError> {
    let r = f.rays.len();
    if sheet.len() != r || psi.len() != r {
        return Err(ConvexityError::BadPartition(format!(
            "{} tags and {} values for {r} rays",
            sheet.len(),
            psi.len()
        )));
    }
    if let Some(bad) = sheet.iter().find(|&&s| s > 1) {
        return Err(ConvexityError::BadPartition(format!("sheet {bad}")));
    }
    let restrict = |s: usize| {
        PLFunction::new((0..r).map(|i| if sheet[i] == s { psi[i].clone() } else { BigRational::zero() }).collect())
    };
    let (w, w2) = (restrict(0), restrict(1));
    Ok(HodgeWitness {
        deg_omega_sq: pairing(f, &w, &w)?,
        deg_omega_prime_sq: pairing(f, &w2, &w2)?,
        deg_mixed: pairing(f, &w, &w2)?,
        omega: w.values,
        omega_prime: w2.values,
    })
}

/// The double cover behind a surface fan: which cover vertex each ray came
/// from, and the ample values `ψ` pulled back to the rays.
#[derive(Clone, Copy, Debug)]
pub struct CoverData<'a> {
    pub cover: &'a CoverGraph,
    pub cover_vertex: &'a [usize],
    pub psi: &'a [BigRational],
}

/// The cover half of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPart {
    pub witness: CoverWitness,
    /// Homology of the cover and of the cut cover, recomputed by ranks.
    pub cover_homology: GraphHomology,
    pub cut_homology: GraphHomology,
    pub hodge: HodgeWitness,
}

/// Everything `certify` checks about one fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub ambient_dim: usize,
    pub balanced: bool,
    pub weight_space_dim: usize,
    pub strongly_extremal: bool,
    pub positivity: bool,
    /// Inertia of the intersection matrix of the 2-dimensional factor.
    pub inertia: InertiaTriple,
    /// Absent for fans that do not come with a double cover.
    pub cover: Option<CoverPart>,
}

impl Certificate {
    pub fn cover_connected(&self) -> bool {
        self.cover.as_ref().is_some_and(|c| c.witness.connected)
    }

    pub fn cut_components(&self) -> usize {
        self.cover.as_ref().map_or(0, |c| c.witness.cut_components)
    }

    pub fn non_convexity_valid(&self) -> bool {
        self.balanced
            && self.cover.as_ref().is_some_and(|c| c.witness.is_witness())
            && self.weight_space_dim == 1
            && self.positivity
    }

    pub fn hodge_violation_valid(&self) -> bool {
        self.inertia.n_plus >= 2
    }

    pub fn is_valid(&self) -> bool {
        self.non_convexity_valid() && self.hodge_violation_valid()
    }
}

fn cover_part(surface: &WeightedFan, data: &CoverData) -> Result<CoverPart, ConvexityError> {
    let cover = data.cover;
    let witness = cover_certificate(cover);
    let cover_homology = graph_homology(&cover.graph().without_isolated())?;
    // The cut keeps every vertex of the cover, crossing edges or not.
    let used: Vec<bool> = cover.graph().degrees().iter().map(|&d| d > 0).collect();
    let cut = cover.cut_graph();
    let mut map = vec![usize::MAX; cut.n_vertices];
    let mut next = 0;
    for v in 0..cut.n_vertices {
        if used[v] {
            map[v] = next;
            next += 1;
        }
    }
    let cut = Graph::new(next, cut.edges.iter().map(|&(a, b)| (map[a], map[b])).collect());
    let cut_homology = graph_homology(&cut)?;
    if (cover_homology.b0 == 1) != witness.connected || cut_homology.b0 != witness.cut_components {
        return Err(ConvexityError::Invariant("component counts disagree".into()));
    }
    if data.cover_vertex.len() != surface.rays.len() || data.cover_vertex.iter().any(|&v| v >= cover.n_vertices()) {
        return Err(ConvexityError::BadPartition("rays do not match cover vertices".into()));
    }
    let sheet: Vec<usize> = data.cover_vertex.iter().map(|&v| cover.sheet(v)).collect();
    let hodge = hodge_witness(surface, &sheet, data.psi)?;
    Ok(CoverPart { witness, cover_homology, cut_homology, hodge })
}

/// Certificate for `fan = ℝ^{k−2} × surface`. The pairing is evaluated on the
/// 2-dimensional factor; for `k > 2` the product only adds lineality.
pub fn certify_parts(
    (k, n, seed): (usize, usize, u64),
    fan: &WeightedFan,
    surface: &WeightedFan,
    cover: Option<CoverData>,
) -> Result<Certificate, ConvexityError> {
    let ws = balancing_weight_space(fan)?;
    let inertia = inertia(&intersection_matrix(surface)?)?;
    let cover = cover.map(|d| cover_part(surface, &d)).transpose()?;
    Ok(Certificate {
        k,
        n,
        seed,
        ambient_dim: fan.ambient_dim,
        balanced: check_balancing(fan)?.is_balanced(),
        weight_space_dim: ws.dim(),
        strongly_extremal: ws.strongly_extremal(),
        positivity: fan.cones.iter().all(|c| c.weight.is_positive()),
        inertia,
        cover,
    })
}

/// `ψ` on the rays of the perturbed fan: the support-function value of the
/// base ray each cover vertex lies over.
pub fn pulled_back_support(state: &PipelineState) -> Vec<BigRational> {
    let p = &state.perturbation;
    let base = &state.base;
    p.cover_vertex.iter().map(|&v| base.support.values[base.ray_vertex[p.cover.base_vertex(v)]].clone()).collect()
}

/// Assembles the certificate of a pipeline run.
pub fn certify(state: &PipelineState) -> Result<Certificate, ConvexityError> {
    let psi = pulled_back_support(state);
    let p = &state.perturbation;
    let data = CoverData { cover: &p.cover, cover_vertex: &p.cover_vertex, psi: &psi };
    certify_parts((state.k, state.n, state.seed), &state.fan, state.surface_fan(), Some(data))
}
