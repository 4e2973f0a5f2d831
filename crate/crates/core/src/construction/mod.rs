//! From `(k, n, seed)` to a balanced `k`-dimensional fan in `ℝⁿ` whose
//! complement fails `(n−k)`-convexity, keeping every intermediate object.

mod base;
mod cover;
mod perturb;

pub use base::{
    build_base, is_antiprism, polygon_pairing, standard_circuit, symmetry_matrix, BaseInstance, BaseOptions,
};
pub use cover::{crossing_flags, double_cover, link_graph, CoverEdge, CoverGraph, Graph};
pub use perturb::{perturb_and_rebalance, CoverSymmetry, PerturbParams, Perturbation, RejectionCounts};

use num_traits::Signed;

use crate::polyhedra::PolyhedraError;
use crate::tropical::{check_balancing, product_with_lineality, TropicalError, WeightedFan};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("{stage} did not succeed within {attempts} attempts")]
    RetriesExhausted { stage: &'static str, attempts: usize },
    #[error("ambient dimension {n} is too small, need at least {needed}")]
    DimensionBound { n: usize, needed: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Polyhedra(PolyhedraError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PipelineConfig {
    pub base: BaseOptions,
    pub perturb: PerturbParams,
}

/// Verification outcome of each stage. A returned state has all of them set;
/// they are recorded so that serialized states are self-describing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageChecks {
    pub genericity: bool,
    pub base_nonnegative: bool,
    pub transversality: bool,
    pub embedded: bool,
    pub strongly_extremal: bool,
    pub balanced: bool,
}

/// Every stage of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineState {
    pub k: usize,
    /// Ambient dimension of the final fan.
    pub n: usize,
    pub seed: u64,
    pub base: BaseInstance,
    /// Link graph `X` of the base fan.
    pub graph: Graph,
    /// The double cover `X̃` on the unperturbed rays.
    pub cover: CoverGraph,
    pub symmetry: CoverSymmetry,
    pub perturbation: Perturbation,
    /// `ℝ^{k−2} × F̂`, in `ℝⁿ`.
    pub fan: WeightedFan,
    pub checks: StageChecks,
}

impl PipelineState {
    /// The 2-dimensional fan before taking the product.
    pub fn surface_fan(&self) -> &WeightedFan {
        &self.perturbation.fan
    }

    pub fn base_dim(&self) -> usize {
        self.base.n
    }
}

/// Dimension of the 2-dimensional factor's ambient space for a `(k, n)` request.
///
/// Codimension one is accepted here and rejected by the perturbation stage,
/// where the dimension bound actually bites.
pub fn base_dimension(k: usize, n: usize) -> Result<usize, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::InvalidConfig(format!("k = {k}, need k ≥ 2")));
    }
    if n <= k {
        return Err(ConstructionError::InvalidConfig(format!("k = {k} is not below the ambient dimension {n}")));
    }
    Ok(n - k + 2)
}

/// Runs the whole construction for a `k`-dimensional fan in `ℝⁿ`.
pub fn build_counterexample(
    k: usize,
    n: usize,
    seed: u64,
    config: &PipelineConfig,
) -> Result<PipelineState, ConstructionError> {
    let m = base_dimension(k, n)?;
    let base = build_base(m, seed, &config.base)?;
    let graph = base.link_graph();
    let weights = base.f.weights();
    let cover = double_cover(&graph, &base.f.rays, &weights, &base.flags)?;
    let symmetry = CoverSymmetry::swap_sheets(base.symmetry.clone(), &base.ray_symmetry);
    let perturbation = perturb_and_rebalance(&cover, &symmetry, &base.flags, &config.perturb, seed)?;
    let fan = product_with_lineality(&perturbation.fan, k - 2);
    if !check_balancing(&fan)?.is_balanced() {
        return Err(ConstructionError::Invariant("product fan is not balanced".into()));
    }
    // Each flag is the outcome of a check that would have aborted the run.
    let checks = StageChecks {
        genericity: base.cayley.is_generic(),
        base_nonnegative: base.f.cones.iter().all(|c| !c.weight.is_negative()),
        transversality: true,
        embedded: true,
        strongly_extremal: true,
        balanced: true,
    };
    Ok(PipelineState { k, n, seed, base, graph, cover, symmetry, perturbation, fan, checks })
}
