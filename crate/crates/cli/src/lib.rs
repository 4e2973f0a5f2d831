//! The `tropicap` command line: run configuration, JSON documents, and one
//! function per subcommand. `main.rs` only parses arguments and prints.

pub mod doc;
pub mod error;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use tropicap::construction::{build_counterexample, BaseOptions, PerturbParams, PipelineConfig};
use tropicap::convexity::{
    certify_parts, intersection_matrix, search_caps, threads_from_env, Cap, CapSearch, Certificate, CoverData,
};
use tropicap::ratlin::inertia;
use tropicap::ratlin::vector::primitive;
use tropicap::tropical::{check_balancing, product_with_lineality, WeightedCone, WeightedFan};
use tropicap::{BigInt, IntVec};

use doc::{
    digest, ints, rat_str, rats, report_digest, report_entries, FanBody, FanDocument, PipelineDocument, Provenance,
};
pub use error::{exit, CliError, ErrorKind};

pub const PIPELINE_FILE: &str = "pipeline.json";
pub const FAN_FILE: &str = "fan.json";
pub const CERTIFICATE_FILE: &str = "certificate.json";

/// What a subcommand prints on stdout and the code it exits with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn json(code: i32, value: &Value) -> Self {
        Outcome { code, stdout: serde_json::to_string_pretty(value).expect("json values serialize") }
    }
}

/// Everything `build` needs. Loadable from a JSON file with the same field names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    /// Attempts at drawing generic polygons.
    pub max_retries: usize,
    /// Offsets are drawn with denominators up to this bound.
    pub denominator: u64,
    pub levels: usize,
    pub tries_per_level: usize,
    pub max_offset: i64,
    /// Trials for `caps` when no count is given on the command line.
    pub cap_trials: usize,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let base = BaseOptions::default();
        let p = PerturbParams::default();
        RunConfig {
            k: 2,
            n: 4,
            seed: 1,
            max_retries: base.max_retries,
            denominator: p.denominator,
            levels: p.levels,
            tries_per_level: p.tries_per_level,
            max_offset: p.max_offset,
            cap_trials: 10_000,
            out_dir: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.k < 2 {
            return Err(CliError::config(format!("k = {} but the construction needs k ≥ 2", self.k)));
        }
        if self.n < self.k + 2 {
            return Err(CliError::config(format!(
                "dimension bound: codimension n − k must be at least 2, got n = {}, k = {}",
                self.n, self.k
            ))
            .at("dimension_bound"));
        }
        let budgets = [
            ("max_retries", self.max_retries as u64),
            ("denominator", self.denominator),
            ("levels", self.levels as u64),
            ("tries_per_level", self.tries_per_level as u64),
            ("cap_trials", self.cap_trials as u64),
        ];
        for (name, v) in budgets {
            if v == 0 {
                return Err(CliError::config(format!("{name} must be positive")));
            }
        }
        if self.max_offset <= 0 {
            return Err(CliError::config("max_offset must be positive"));
        }
        Ok(())
    }

    pub fn pipeline_config(&self) -> PipelineConfig {
        PipelineConfig {
            base: BaseOptions { max_retries: self.max_retries, degenerate_first: false },
            perturb: PerturbParams {
                denominator: self.denominator,
                levels: self.levels,
                tries_per_level: self.tries_per_level,
                max_offset: self.max_offset,
                require_cut_witness: true,
            },
        }
    }

    /// The command line that reproduces the run; output paths are left out
    /// so that documents do not depend on where they were written.
    pub fn command_line(&self) -> String {
        format!(
            "build --k {} --n {} --seed {} --max-retries {} --denominator {} --levels {} --tries-per-level {} --max-offset {}",
            self.k, self.n, self.seed, self.max_retries, self.denominator, self.levels, self.tries_per_level, self.max_offset
        )
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::new(ErrorKind::Io, "read", format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::new(ErrorKind::Io, "write", format!("{}: {e}", path.display())))
}

/// Documents produced by `build`, before they are written.
pub struct BuildDocuments {
    pub pipeline: PipelineDocument,
    pub fan: FanDocument,
}

pub fn build_documents(config: &RunConfig) -> Result<BuildDocuments, CliError> {
    config.validate()?;
    let state = build_counterexample(config.k, config.n, config.seed, &config.pipeline_config())?;
    let report = check_balancing(&state.fan)?;
    if !report.is_balanced() {
        return Err(CliError::new(ErrorKind::Invariant, "balancing", "the pipeline returned an unbalanced fan"));
    }
    let seed = Some(config.seed.to_string());
    let pipeline = PipelineDocument::from_state(
        &state,
        &report,
        Provenance { command: config.command_line(), seed: seed.clone(), parents: vec![] },
    );
    let fan = FanDocument::new(
        &state.fan,
        Provenance { command: config.command_line(), seed, parents: vec![digest(&pipeline)] },
    );
    Ok(BuildDocuments { pipeline, fan })
}

/// Runs the pipeline and writes `pipeline.json` and `fan.json` into `out_dir`.
pub fn cmd_build(config: &RunConfig) -> Result<Outcome, CliError> {
    let docs = build_documents(config)?;
    fs::create_dir_all(&config.out_dir)
        .map_err(|e| CliError::new(ErrorKind::Io, "write", format!("{}: {e}", config.out_dir.display())))?;
    let pipeline_path = config.out_dir.join(PIPELINE_FILE);
    let fan_path = config.out_dir.join(FAN_FILE);
    write_json(&pipeline_path, &docs.pipeline)?;
    write_json(&fan_path, &docs.fan)?;
    Ok(Outcome::json(
        exit::OK,
        &json!({
            "pipeline": pipeline_path.display().to_string(),
            "fan": fan_path.display().to_string(),
            "ambient_dim": docs.fan.fan.ambient_dim,
            "dim": docs.fan.fan.dim,
            "rays": docs.fan.fan.rays.len(),
            "cones": docs.fan.fan.cones.len(),
            "fan_digest": docs.pipeline.digests.fan,
        }),
    ))
}

/// A parsed input file: a bare fan or a full pipeline run.
pub enum Input {
    Fan(FanDocument),
    Pipeline(Box<PipelineDocument>),
}

impl Input {
    pub fn fan_body(&self) -> &FanBody {
        match self {
            Input::Fan(d) => &d.fan,
            Input::Pipeline(p) => &p.fan,
        }
    }
}

pub fn parse_input(text: &str) -> Result<Input, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::parse(e.to_string()))?;
    let kind = value.get("kind").and_then(Value::as_str).unwrap_or("fan");
    let input = match kind {
        "fan" => Input::Fan(serde_json::from_value(value).map_err(|e| CliError::parse(e.to_string()))?),
        "pipeline" => {
            Input::Pipeline(Box::new(serde_json::from_value(value).map_err(|e| CliError::parse(e.to_string()))?))
        }
        other => return Err(CliError::parse(format!("unsupported document kind {other:?}"))),
    };
    let version = match &input {
        Input::Fan(d) => d.format_version,
        Input::Pipeline(p) => p.format_version,
    };
    if version != doc::FORMAT_VERSION {
        return Err(CliError::parse(format!("unsupported format version {version}")));
    }
    Ok(input)
}

pub fn load_input(path: &Path) -> Result<Input, CliError> {
    parse_input(&read(path)?).map_err(|e| CliError { message: format!("{}: {}", path.display(), e.message), ..e })
}

/// Balancing report of the fan in a document; exit 1 when unbalanced.
pub fn cmd_verify(path: &Path) -> Result<Outcome, CliError> {
    let input = load_input(path)?;
    let body = input.fan_body();
    let fan = body.to_fan()?;
    let report = check_balancing(&fan)?;
    let balanced = report.is_balanced();
    let failures: Vec<_> = report_entries(&report).into_iter().filter(|e| e.defect.iter().any(|x| x != "0")).collect();
    let value = json!({
        "kind": "balancing_report",
        "balanced": balanced,
        "faces_checked": report.entries.len(),
        "failures": failures,
        "fan_digest": body.digest(),
        "report_digest": report_digest(&report),
    });
    Ok(Outcome::json(if balanced { exit::OK } else { exit::BALANCING }, &value))
}

fn is_unit_vector(v: &IntVec) -> Option<usize> {
    let one = BigInt::from(1);
    let nonzero: Vec<usize> = (0..v.len()).filter(|&i| v[i] != BigInt::from(0)).collect();
    (nonzero.len() == 1 && v[nonzero[0]] == one).then(|| nonzero[0])
}

/// The 2-dimensional fan the intersection pairing is evaluated on.
///
/// When the lineality space is spanned by coordinate vectors and the fan is
/// 2-dimensional modulo it, those coordinates are dropped. Otherwise a
/// 2-dimensional fan keeps its ambient space and the lineality directions
/// become explicit rays `±l`.
pub fn surface_factor(f: &WeightedFan) -> Result<WeightedFan, CliError> {
    let m = f.lineality.len();
    if f.dim == 2 + m && m > 0 {
        let coords: Option<Vec<usize>> = f.lineality.iter().map(is_unit_vector).collect();
        if let Some(mut coords) = coords {
            coords.sort_unstable();
            coords.dedup();
            if coords.len() == m {
                let keep: Vec<usize> = (0..f.ambient_dim).filter(|i| !coords.contains(i)).collect();
                let rays = f
                    .rays
                    .iter()
                    .map(|r| {
                        let p: IntVec = keep.iter().map(|&i| r[i].clone()).collect();
                        if p.iter().all(|x| *x == BigInt::from(0)) {
                            Err(CliError::parse("a ray lies in the lineality space"))
                        } else {
                            Ok(primitive(&p))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                return WeightedFan::new(keep.len(), 2, rays, vec![], f.cones.clone())
                    .map_err(|e| CliError::parse(format!("surface factor: {e}")));
            }
        }
    }
    if f.dim != 2 {
        return Err(CliError::parse(format!(
            "the pairing needs a 2-dimensional fan, or one that is 2-dimensional modulo coordinate lineality; got dimension {} with {} lineality vectors",
            f.dim, m
        )));
    }
    if m == 0 {
        return Ok(f.clone());
    }
    // Every cone σ + span(L) becomes the cones σ + cone(±l₁, …, ±lₘ).
    let mut rays = f.rays.clone();
    let mut signed: Vec<[usize; 2]> = Vec::new();
    for l in &f.lineality {
        let p = primitive(l);
        let neg: IntVec = p.iter().map(|x| -x).collect();
        rays.push(p);
        rays.push(neg);
        signed.push([rays.len() - 2, rays.len() - 1]);
    }
    let mut cones = Vec::new();
    for c in &f.cones {
        for mask in 0..(1usize << m) {
            let mut r = c.rays.clone();
            r.extend((0..m).map(|j| signed[j][(mask >> j) & 1]));
            cones.push(WeightedCone { rays: r, weight: c.weight.clone() });
        }
    }
    WeightedFan::new(f.ambient_dim, 2, rays, vec![], cones).map_err(|e| CliError::parse(format!("surface factor: {e}")))
}

fn check_digest(stage: &str, recorded: &str, computed: &str) -> Result<(), CliError> {
    if recorded != computed {
        return Err(CliError::new(
            ErrorKind::Balancing,
            stage,
            format!("digest mismatch: recorded {recorded}, recomputed {computed}"),
        ));
    }
    Ok(())
}

/// Certificate status: `valid`, `no violation` when the pairing has at most
/// one positive eigenvalue, and `incomplete` otherwise.
pub fn certificate_status(c: &Certificate) -> &'static str {
    if c.is_valid() {
        "valid"
    } else if c.inertia.n_plus <= 1 {
        "no violation"
    } else {
        "incomplete"
    }
}

pub fn certificate_document(c: &Certificate, digests: Value, provenance: Provenance) -> Value {
    let homology = |h: &tropicap::convexity::GraphHomology| json!({ "b0": h.b0, "b1": h.b1 });
    let cover = c.cover.as_ref().map(|p| {
        json!({
            "connected": p.witness.connected,
            "cut_components": p.witness.cut_components,
            "cover_homology": homology(&p.cover_homology),
            "cut_homology": homology(&p.cut_homology),
        })
    });
    let hodge = c.cover.as_ref().map(|p| {
        let h = &p.hodge;
        json!({
            "omega": rats(&h.omega),
            "omega_prime": rats(&h.omega_prime),
            "deg_omega_sq": rat_str(&h.deg_omega_sq),
            "deg_omega_prime_sq": rat_str(&h.deg_omega_prime_sq),
            "deg_mixed": rat_str(&h.deg_mixed),
            "expected_pattern": h.has_expected_pattern(),
            "gram_positive_definite": h.gram_positive_definite(),
        })
    });
    json!({
        "kind": "certificate",
        "format_version": doc::FORMAT_VERSION,
        "k": c.k,
        "n": c.n,
        "seed": c.seed.to_string(),
        "ambient_dim": c.ambient_dim,
        "status": certificate_status(c),
        "valid": c.is_valid(),
        "non_convexity_valid": c.non_convexity_valid(),
        "hodge_violation_valid": c.hodge_violation_valid(),
        "balanced": c.balanced,
        "cover_connected": c.cover_connected(),
        "cut_components": c.cut_components(),
        "weight_space_dim": c.weight_space_dim,
        "strongly_extremal": c.strongly_extremal,
        "positivity": c.positivity,
        "inertia": { "n_plus": c.inertia.n_plus, "n_zero": c.inertia.n_zero, "n_minus": c.inertia.n_minus },
        "cover": cover,
        "hodge_witness": hodge,
        "digests": digests,
        "provenance": provenance,
    })
}

/// Recomputes the certificate of a document. Pipeline documents are checked
/// against their recorded digests first.
pub fn certify_input(input: &Input) -> Result<(Certificate, Value), CliError> {
    match input {
        Input::Pipeline(p) => {
            let surface_body = &p.perturbation.fan;
            check_digest("surface_fan_digest", &p.digests.surface_fan, &surface_body.digest())?;
            check_digest("fan_digest", &p.digests.fan, &p.fan.digest())?;
            let fan = p.fan.to_fan()?;
            let report = check_balancing(&fan)?;
            check_digest("balancing_report_digest", &p.digests.balancing_report, &report_digest(&report))?;
            let surface = surface_body.to_fan()?;
            if p.k < 2 || product_with_lineality(&surface, p.k - 2) != fan {
                return Err(CliError::new(ErrorKind::Invariant, "product", "fan is not ℝ^{k−2} × surface fan"));
            }
            let cover = p.perturbation.cover.to_cover()?;
            let psi = p.pulled_back_support(&cover)?;
            let seed: u64 = p.seed.parse().map_err(|_| CliError::parse("seed is not a 64-bit unsigned integer"))?;
            let data = CoverData { cover: &cover, cover_vertex: &p.perturbation.cover_vertex, psi: &psi };
            let c = certify_parts((p.k, p.n, seed), &fan, &surface, Some(data))?;
            let digests = json!({
                "input": digest(p),
                "fan": p.digests.fan,
                "surface_fan": p.digests.surface_fan,
                "balancing_report": p.digests.balancing_report,
            });
            Ok((c, digests))
        }
        Input::Fan(d) => {
            let fan = d.fan.to_fan()?;
            let report = check_balancing(&fan)?;
            let surface = surface_factor(&fan)?;
            let k = fan.dim;
            let seed = d.provenance.seed.as_deref().and_then(|s| s.parse().ok()).unwrap_or(0);
            let c = if report.is_balanced() {
                certify_parts((k, fan.ambient_dim, seed), &fan, &surface, None)?
            } else {
                return Err(CliError::new(ErrorKind::Balancing, "balancing", "the fan is not balanced"));
            };
            let digests = json!({
                "input": digest(d),
                "fan": d.fan.digest(),
                "balancing_report": report_digest(&report),
            });
            Ok((c, digests))
        }
    }
}

/// Writes the certificate to `out` (default: `certificate.json` next to the
/// input). Exit 0 iff the certificate is valid.
pub fn cmd_certify(path: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let input = load_input(path)?;
    let (c, digests) = certify_input(&input)?;
    let parent = digests["input"].as_str().unwrap_or_default().to_string();
    let provenance = Provenance { command: "certify".into(), seed: Some(c.seed.to_string()), parents: vec![parent] };
    let document = certificate_document(&c, digests, provenance);
    let out = match out {
        Some(p) => p.to_path_buf(),
        None => path.parent().unwrap_or(Path::new(".")).join(CERTIFICATE_FILE),
    };
    write_json(&out, &document)?;
    let code = if !c.balanced {
        exit::BALANCING
    } else if c.is_valid() {
        exit::OK
    } else {
        exit::NOT_CERTIFIED
    };
    Ok(Outcome::json(
        code,
        &json!({
            "certificate": out.display().to_string(),
            "status": certificate_status(&c),
            "valid": c.is_valid(),
        }),
    ))
}

fn cap_json(cap: &Cap) -> Value {
    json!({
        "center": rats(&cap.center),
        "basis": cap.basis.iter().map(|b| ints(b)).collect::<Vec<_>>(),
        "radius": rat_str(&cap.radius),
        "escape": ints(&cap.escape),
        "epsilon": rat_str(&cap.epsilon),
        "witness": rats(&cap.witness),
    })
}

/// Searches for a supporting cap. `dim` defaults to the codimension.
pub fn cmd_caps(path: &Path, dim: Option<usize>, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    let input = load_input(path)?;
    let fan = input.fan_body().to_fan()?;
    let cap_dim = dim.unwrap_or(fan.ambient_dim - fan.dim);
    if cap_dim == 0 || cap_dim >= fan.ambient_dim {
        return Err(CliError::config(format!("cap dimension must lie in 1..{}", fan.ambient_dim)));
    }
    let search = CapSearch { threads: threads_from_env(), ..CapSearch::new(cap_dim, trials, seed) };
    let value = match search_caps(&fan, &search) {
        Some((trial, cap)) => json!({
            "kind": "cap_report",
            "found": true,
            "cap_dim": cap_dim,
            "trials": trials,
            "seed": seed.to_string(),
            "trial": trial,
            "cap": cap_json(&cap),
        }),
        None => json!({
            "kind": "cap_report",
            "found": false,
            "cap_dim": cap_dim,
            "trials": trials,
            "seed": seed.to_string(),
            "message": format!("none found in {trials} trials"),
        }),
    };
    Ok(Outcome::json(exit::OK, &value))
}

/// Inertia of the intersection matrix of the 2-dimensional factor.
pub fn cmd_inertia(path: &Path) -> Result<Outcome, CliError> {
    let input = load_input(path)?;
    let fan = input.fan_body().to_fan()?;
    if !check_balancing(&fan)?.is_balanced() {
        return Err(CliError::new(ErrorKind::Balancing, "balancing", "the fan is not balanced"));
    }
    let surface = surface_factor(&fan)?;
    let m = intersection_matrix(&surface)?;
    let t = inertia(&m).map_err(|e| CliError::new(ErrorKind::Invariant, "inertia", e.to_string()))?;
    let value = json!({
        "kind": "inertia",
        "rays": surface.rays.len(),
        "n_plus": t.n_plus,
        "n_zero": t.n_zero,
        "n_minus": t.n_minus,
    });
    Ok(Outcome::json(exit::OK, &value))
}
