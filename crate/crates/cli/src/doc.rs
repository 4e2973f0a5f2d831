//! JSON documents. Every number that is part of the mathematics is written
//! as a decimal string (`"12"`, `"-3/7"`); counts and indices are plain JSON
//! integers.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use tropicap::construction::{CoverEdge, CoverGraph, Graph, PipelineState};
use tropicap::polyhedra::{FlagPair, Polytope};
use tropicap::tropical::{BalancingReport, WeightedCone, WeightedFan};
use tropicap::{BigInt, BigRational, IntMatrix, IntVec, RatVec};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

pub fn int_str(x: &BigInt) -> String {
    x.to_string()
}

pub fn rat_str(x: &BigRational) -> String {
    x.to_string()
}

pub fn ints(v: &[BigInt]) -> Vec<String> {
    v.iter().map(int_str).collect()
}

pub fn rats(v: &[BigRational]) -> Vec<String> {
    v.iter().map(rat_str).collect()
}

pub fn parse_int(s: &str) -> Result<BigInt, CliError> {
    s.parse().map_err(|_| CliError::parse(format!("not an integer: {s:?}")))
}

pub fn parse_rat(s: &str) -> Result<BigRational, CliError> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (parse_int(p)?, parse_int(q)?),
        None => (parse_int(s)?, BigInt::from(1)),
    };
    if q == BigInt::from(0) {
        return Err(CliError::parse(format!("zero denominator: {s:?}")));
    }
    Ok(BigRational::new(p, q))
}

pub fn parse_ints(v: &[String]) -> Result<IntVec, CliError> {
    v.iter().map(|s| parse_int(s)).collect()
}

pub fn parse_rats(v: &[String]) -> Result<RatVec, CliError> {
    v.iter().map(|s| parse_rat(s)).collect()
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| ints(r)).collect()
}

/// Lowercase hex SHA-256 of the compact JSON serialization.
pub fn digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("documents serialize");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub command: String,
    pub seed: Option<String>,
    /// Digests of the documents this one was derived from.
    pub parents: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ConeDoc {
    pub rays: Vec<usize>,
    pub weight: String,
}

/// The mathematical content of a weighted fan.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FanBody {
    pub ambient_dim: usize,
    pub dim: usize,
    pub rays: Vec<Vec<String>>,
    pub lineality: Vec<Vec<String>>,
    pub cones: Vec<ConeDoc>,
}

impl FanBody {
    pub fn from_fan(f: &WeightedFan) -> Self {
        FanBody {
            ambient_dim: f.ambient_dim,
            dim: f.dim,
            rays: f.rays.iter().map(|r| ints(r)).collect(),
            lineality: f.lineality.iter().map(|r| ints(r)).collect(),
            cones: f.cones.iter().map(|c| ConeDoc { rays: c.rays.clone(), weight: rat_str(&c.weight) }).collect(),
        }
    }

    pub fn to_fan(&self) -> Result<WeightedFan, CliError> {
        let rays = self.rays.iter().map(|r| parse_ints(r)).collect::<Result<Vec<_>, _>>()?;
        let lineality = self.lineality.iter().map(|r| parse_ints(r)).collect::<Result<Vec<_>, _>>()?;
        let cones = self
            .cones
            .iter()
            .map(|c| Ok(WeightedCone { rays: c.rays.clone(), weight: parse_rat(&c.weight)? }))
            .collect::<Result<Vec<_>, CliError>>()?;
        WeightedFan::new(self.ambient_dim, self.dim, rays, lineality, cones)
            .map_err(|e| CliError::parse(format!("invalid fan: {e}")))
    }

    pub fn digest(&self) -> String {
        digest(self)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FanDocument {
    pub kind: String,
    pub format_version: u32,
    #[serde(flatten)]
    pub fan: FanBody,
    pub provenance: Provenance,
}

impl FanDocument {
    pub fn new(f: &WeightedFan, provenance: Provenance) -> Self {
        FanDocument { kind: "fan".into(), format_version: FORMAT_VERSION, fan: FanBody::from_fan(f), provenance }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FlagDoc {
    pub l_normal: Vec<String>,
    pub i_normal: Vec<String>,
    pub l_sign: i8,
    pub i_sign: i8,
}

impl FlagDoc {
    pub fn from_flags(f: &FlagPair) -> Self {
        FlagDoc { l_normal: ints(&f.l_normal), i_normal: ints(&f.i_normal), l_sign: f.l_sign, i_sign: f.i_sign }
    }

    pub fn to_flags(&self) -> Result<FlagPair, CliError> {
        Ok(FlagPair {
            l_normal: parse_ints(&self.l_normal)?,
            i_normal: parse_ints(&self.i_normal)?,
            l_sign: self.l_sign,
            i_sign: self.i_sign,
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FacetDoc {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PolytopeDoc {
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub facets: Vec<FacetDoc>,
}

impl PolytopeDoc {
    pub fn from_polytope(p: &Polytope) -> Self {
        PolytopeDoc {
            ambient_dim: p.ambient_dim,
            dim: p.dim,
            vertices: p.vertices.iter().map(|v| rats(v)).collect(),
            facets: p.facets.iter().map(|f| FacetDoc { normal: ints(&f.normal), offset: rat_str(&f.offset) }).collect(),
        }
    }
}

/// A polyhedral fan by its maximal cones.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ComplexDoc {
    pub rays: Vec<Vec<String>>,
    pub maximal_cones: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GraphDoc {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc { n_vertices: g.n_vertices, edges: g.edges.clone() }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CoverEdgeDoc {
    pub ends: (usize, usize),
    pub crossing: bool,
    pub source: usize,
    pub weight: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CoverDoc {
    pub base_vertices: usize,
    pub rays: Vec<Vec<String>>,
    pub edges: Vec<CoverEdgeDoc>,
}

impl CoverDoc {
    pub fn from_cover(c: &CoverGraph) -> Self {
        CoverDoc {
            base_vertices: c.base_vertices,
            rays: c.rays.iter().map(|r| ints(r)).collect(),
            edges: c
                .edges
                .iter()
                .map(|e| CoverEdgeDoc {
                    ends: e.ends,
                    crossing: e.crossing,
                    source: e.source,
                    weight: rat_str(&e.weight),
                })
                .collect(),
        }
    }

    pub fn to_cover(&self) -> Result<CoverGraph, CliError> {
        let rays = self.rays.iter().map(|r| parse_ints(r)).collect::<Result<Vec<_>, _>>()?;
        if self.base_vertices == 0 || rays.len() != 2 * self.base_vertices {
            return Err(CliError::parse("cover must have two sheets of equal size"));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                if e.ends.0 >= rays.len() || e.ends.1 >= rays.len() {
                    return Err(CliError::parse("cover edge endpoint out of range"));
                }
                Ok(CoverEdge { ends: e.ends, crossing: e.crossing, source: e.source, weight: parse_rat(&e.weight)? })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(CoverGraph { base_vertices: self.base_vertices, rays, edges })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SymmetryDoc {
    pub matrix: Vec<Vec<String>>,
    pub vertex_map: Vec<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RejectionDoc {
    pub transversality: usize,
    pub not_positive: usize,
    pub reduction_stuck: usize,
    pub witness_lost: usize,
    pub not_embedded: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PerturbationDoc {
    /// `F̂₂`: the rebalanced surface fan.
    pub fan: FanBody,
    pub cover_vertex: Vec<usize>,
    /// The perturbed cover, restricted to the support.
    pub cover: CoverDoc,
    pub attempts: usize,
    pub level: usize,
    pub initial_kernel_dim: usize,
    pub reductions: usize,
    pub rejections: RejectionDoc,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ChecksDoc {
    pub genericity: bool,
    pub base_nonnegative: bool,
    pub transversality: bool,
    pub embedded: bool,
    pub strongly_extremal: bool,
    pub balanced: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RetriesDoc {
    pub genericity: usize,
    pub perturbation_attempts: usize,
    pub perturbation_level: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PipelineDigests {
    pub surface_fan: String,
    pub fan: String,
    pub balancing_report: String,
}

/// Every stage of a pipeline run.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PipelineDocument {
    pub kind: String,
    pub format_version: u32,
    pub k: usize,
    pub n: usize,
    pub seed: String,
    /// Ambient dimension of the 2-dimensional factor.
    pub base_dim: usize,
    pub flags: FlagDoc,
    pub circuit: Vec<Vec<String>>,
    pub pairing: Vec<usize>,
    pub polygons: Vec<Vec<Vec<String>>>,
    pub symmetry: Vec<Vec<String>>,
    pub cayley: PolytopeDoc,
    pub polar: PolytopeDoc,
    pub sigma_prime: ComplexDoc,
    /// Support function of the polar on the rays of `sigma_prime`.
    pub support: Vec<String>,
    pub base_fan: FanBody,
    pub ray_vertex: Vec<usize>,
    pub ray_symmetry: Vec<usize>,
    pub link_graph: GraphDoc,
    pub cover: CoverDoc,
    pub cover_symmetry: SymmetryDoc,
    pub perturbation: PerturbationDoc,
    pub fan: FanBody,
    pub checks: ChecksDoc,
    pub retries: RetriesDoc,
    pub digests: PipelineDigests,
    pub provenance: Provenance,
}

/// Canonical form of a balancing report, for digests and `verify` output.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct BalancingEntryDoc {
    pub face: Vec<usize>,
    pub defect: Vec<String>,
}

pub fn report_entries(report: &BalancingReport) -> Vec<BalancingEntryDoc> {
    report.entries.iter().map(|e| BalancingEntryDoc { face: e.face.clone(), defect: rats(&e.defect) }).collect()
}

pub fn report_digest(report: &BalancingReport) -> String {
    digest(&report_entries(report))
}

impl PipelineDocument {
    pub fn from_state(s: &PipelineState, report: &BalancingReport, provenance: Provenance) -> Self {
        let b = &s.base;
        let p = &s.perturbation;
        let surface = FanBody::from_fan(&p.fan);
        let fan = FanBody::from_fan(&s.fan);
        PipelineDocument {
            kind: "pipeline".into(),
            format_version: FORMAT_VERSION,
            k: s.k,
            n: s.n,
            seed: s.seed.to_string(),
            base_dim: b.n,
            flags: FlagDoc::from_flags(&b.flags),
            circuit: b.circuit.iter().map(|v| ints(v)).collect(),
            pairing: b.pairing.clone(),
            polygons: b.polygons.iter().map(|p| p.iter().map(|v| ints(v)).collect()).collect(),
            symmetry: matrix_rows(&b.symmetry),
            cayley: PolytopeDoc::from_polytope(&b.cayley.polytope),
            polar: PolytopeDoc::from_polytope(&b.polar),
            sigma_prime: ComplexDoc {
                rays: b.sigma_prime.rays.iter().map(|r| ints(r)).collect(),
                maximal_cones: b.sigma_prime.maximal_cones().iter().map(|c| c.rays.clone()).collect(),
            },
            support: rats(&b.support.values),
            base_fan: FanBody::from_fan(&b.f),
            ray_vertex: b.ray_vertex.clone(),
            ray_symmetry: b.ray_symmetry.clone(),
            link_graph: GraphDoc::from_graph(&s.graph),
            cover: CoverDoc::from_cover(&s.cover),
            cover_symmetry: SymmetryDoc {
                matrix: matrix_rows(&s.symmetry.matrix),
                vertex_map: s.symmetry.vertex_map.clone(),
            },
            perturbation: PerturbationDoc {
                fan: surface.clone(),
                cover_vertex: p.cover_vertex.clone(),
                cover: CoverDoc::from_cover(&p.cover),
                attempts: p.attempts,
                level: p.level,
                initial_kernel_dim: p.initial_kernel_dim,
                reductions: p.reductions,
                rejections: RejectionDoc {
                    transversality: p.rejections.transversality,
                    not_positive: p.rejections.not_positive,
                    reduction_stuck: p.rejections.reduction_stuck,
                    witness_lost: p.rejections.witness_lost,
                    not_embedded: p.rejections.not_embedded,
                },
            },
            checks: ChecksDoc {
                genericity: s.checks.genericity,
                base_nonnegative: s.checks.base_nonnegative,
                transversality: s.checks.transversality,
                embedded: s.checks.embedded,
                strongly_extremal: s.checks.strongly_extremal,
                balanced: s.checks.balanced,
            },
            retries: RetriesDoc {
                genericity: b.genericity_retries,
                perturbation_attempts: p.attempts,
                perturbation_level: p.level,
            },
            digests: PipelineDigests {
                surface_fan: surface.digest(),
                fan: fan.digest(),
                balancing_report: report_digest(report),
            },
            fan,
            provenance,
        }
    }

    /// `ψ` on the rays of the surface fan, read back through the cover.
    pub fn pulled_back_support(&self, cover: &CoverGraph) -> Result<Vec<BigRational>, CliError> {
        let support = parse_rats(&self.support)?;
        self.perturbation
            .cover_vertex
            .iter()
            .map(|&v| {
                if v >= cover.n_vertices() {
                    return Err(CliError::parse("cover vertex out of range"));
                }
                let r = cover.base_vertex(v);
                let c = *self.ray_vertex.get(r).ok_or_else(|| CliError::parse("base ray out of range"))?;
                support.get(c).cloned().ok_or_else(|| CliError::parse("support value out of range"))
            })
            .collect()
    }
}
