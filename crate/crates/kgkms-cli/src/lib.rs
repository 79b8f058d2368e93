//! Command-line driver: reads a graph document, runs the analysis pipeline
//! and writes a JSON or text report.
//!
//! Exit codes: 0 ok, 1 invalid input, 2 hypothesis violation, 3 oracle failure.

mod render;

use clap::{Parser, ValueEnum};
use kgkms::classifier::{classify, ClassifierError, PhaseReport};
use kgkms::input::GraphDocument;
use kgkms::kms::{subinvariance_check, y_beta, y_beta_series, Dynamics, KmsError, KmsStateVector, Provenance};
use kgkms::path2::{gap_projection_value, Color, kms_spot_check, ConcreteTwoGraph, GapProjectionSpec, DEFAULT_PATH_BOUND};
use kgkms::skeleton::Skeleton;
use kgkms::spectral::{SpectralError, SpectralSummary};
use kgkms::structure::{order_vertices_relaxed, validate_two_component, Decomposition};
use nalgebra::DVector;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

pub use render::round_floats;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_BOUND: u32 = 2;
/// Inverse temperatures used by `verify` when none are given.
pub const DEFAULT_VERIFY_BETAS: [f64; 3] = [1.01, 1.5, 3.0];
const SPOT_SAMPLES: usize = 200;
const SPOT_SEED: u64 = 0x6b67_6b6d;
/// Target and acceptance threshold for the certified series tail.
const SERIES_TARGET: f64 = 1e-11;
const SERIES_CERTIFIED: f64 = 1e-10;
const SKELETON_ONLY: &str = "skeleton-level only: commuting vertex matrices are necessary but not sufficient for a k-graph";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Report,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "kgkms", about = "KMS state analysis for finite higher-rank graphs")]
struct Args {
    /// Graph document (JSON).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    command: Command,
    /// Inverse temperature; repeat for several.
    #[arg(long = "beta", allow_negative_numbers = true)]
    beta: Vec<f64>,
    /// Tolerance for the numerical oracles.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Longest path length used by the path oracles.
    #[arg(long)]
    bound: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub command: Command,
    pub betas: Vec<f64>,
    pub tol: f64,
    pub bound: u32,
    pub format: Format,
}

impl RunConfig {
    fn from_args(a: Args) -> Result<Self, Failure> {
        let tol = a.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::invalid(format!("--tol must be positive, got {tol}")));
        }
        let bound = a.bound.unwrap_or(DEFAULT_BOUND);
        if bound < 1 || bound > DEFAULT_PATH_BOUND {
            return Err(Failure::invalid(format!("--bound must lie in 1..={DEFAULT_PATH_BOUND}, got {bound}")));
        }
        if let Some(b) = a.beta.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return Err(Failure::invalid(format!("--beta must be positive, got {b}")));
        }
        Ok(RunConfig { input: a.input, command: a.command, betas: a.beta, tol, bound, format: a.format })
    }
}

/// An error with its exit code and a machine-readable kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn invalid(message: String) -> Self {
        Failure { code: EXIT_INVALID_INPUT, kind: "invalid_input", message }
    }

    fn hypothesis(message: String) -> Self {
        Failure { code: EXIT_HYPOTHESIS, kind: "hypothesis_violation", message }
    }

    fn oracle(message: String) -> Self {
        Failure { code: EXIT_ORACLE, kind: "oracle_failure", message }
    }

    fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code, "kind": self.kind, "message": self.message } })
    }
}

impl From<KmsError> for Failure {
    fn from(e: KmsError) -> Self {
        match e {
            KmsError::CycleGraph { .. }
            | KmsError::BadRates
            | KmsError::Subcritical { .. }
            | KmsError::HypothesisViolation(_)
            | KmsError::NotAState(_) => Failure::hypothesis(e.to_string()),
            KmsError::Spectral(s) => s.into(),
            _ => Failure::oracle(e.to_string()),
        }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Reducible | SpectralError::NotNonnegative => Failure::hypothesis(e.to_string()),
            _ => Failure::oracle(e.to_string()),
        }
    }
}

impl From<ClassifierError> for Failure {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::Kms(k) => k.into(),
            other => Failure::hypothesis(other.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let help = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let _ = write!(out, "{e}");
            return if help { EXIT_OK } else { EXIT_INVALID_INPUT };
        }
    };
    let format = args.format;
    let outcome = RunConfig::from_args(args).and_then(|cfg| execute(&cfg));
    let (code, doc) = match outcome {
        Ok((code, doc)) => (code, doc),
        Err(f) => {
            log::error!("{}: {}", f.kind, f.message);
            (f.code, f.to_json())
        }
    };
    let doc = round_floats(doc);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("report serializes"),
        Format::Text => render::text(&doc),
    };
    let _ = writeln!(out, "{text}");
    code
}

/// Runs one command; the exit code is nonzero only for oracle failures
/// detected while producing a complete document.
pub fn execute(cfg: &RunConfig) -> Result<(i32, Value), Failure> {
    let src = std::fs::read_to_string(&cfg.input).map_err(|e| Failure::invalid(format!("cannot read {}: {e}", cfg.input.display())))?;
    let doc = GraphDocument::parse(&src).map_err(|e| Failure::invalid(e.to_string()))?;
    let s = doc.skeleton().map_err(|e| Failure::invalid(e.to_string()))?;
    let g = doc.concrete().map_err(|e| Failure::invalid(e.to_string()))?;
    log::info!("loaded graph with {} vertices and {} colours", s.n(), s.k());
    match cfg.command {
        Command::Validate => Ok((EXIT_OK, cmd_validate(&s, g.as_ref()))),
        Command::Report => cmd_report(&s, g.as_ref(), cfg).map(|v| (EXIT_OK, v)),
        Command::Verify => cmd_verify(&s, g.as_ref(), &doc, cfg),
    }
}

fn graph_json(s: &Skeleton, g: Option<&ConcreteTwoGraph>) -> Value {
    let mut v = json!({
        "vertices": s.names(),
        "k": s.k(),
        "concrete": g.is_some(),
    });
    if g.is_none() {
        v["disclaimer"] = json!(SKELETON_ONLY);
    }
    v
}

fn cmd_validate(s: &Skeleton, g: Option<&ConcreteTwoGraph>) -> Value {
    json!({
        "command": "validate",
        "valid": true,
        "graph": graph_json(s, g),
        "sinks_sources": s.sinks_sources(),
    })
}

struct Analysis {
    d: Decomposition,
    summary: SpectralSummary,
    dynamics: Dynamics,
    report: PhaseReport,
}

fn analyse(s: &Skeleton, betas: &[f64]) -> Result<Analysis, Failure> {
    let d = Decomposition::new(s);
    let summary = SpectralSummary::new(s, &d)?;
    let dynamics = Dynamics::preferred(&summary)?;
    let report = classify(s, &d, &summary, &dynamics, betas)?;
    Ok(Analysis { d, summary, dynamics, report })
}

fn cmd_report(s: &Skeleton, g: Option<&ConcreteTwoGraph>, cfg: &RunConfig) -> Result<Value, Failure> {
    let a = analyse(s, &cfg.betas)?;
    let components: Vec<Value> = a
        .d
        .components
        .iter()
        .map(|c| json!({ "vertices": c.vertices.iter().map(|&v| s.name(v)).collect::<Vec<_>>(), "trivial": c.trivial }))
        .collect();
    let two = match validate_two_component(s, &a.d) {
        Ok(r) => json!(r),
        Err(e) => json!({ "not_applicable": e.to_string() }),
    };
    Ok(json!({
        "command": "report",
        "graph": graph_json(s, g),
        "components": components,
        "ordering": order_vertices_relaxed(s, &a.d),
        "two_component": two,
        "spectral": a.summary,
        "dynamics": a.dynamics,
        "phase_report": a.report,
    }))
}

/// One oracle comparison in the verify document.
fn check(name: String, passed: bool, value: f64, tol: f64, detail: Value) -> Value {
    json!({ "name": name, "status": if passed { "pass" } else { "fail" }, "value": value, "tolerance": tol, "detail": detail })
}

fn report_states(r: &PhaseReport) -> Vec<KmsStateVector> {
    r.regimes.iter().flat_map(|g| g.states.iter().cloned()).collect()
}

fn cmd_verify(s: &Skeleton, g: Option<&ConcreteTwoGraph>, doc: &GraphDocument, cfg: &RunConfig) -> Result<(i32, Value), Failure> {
    let a = analyse(s, &[])?;
    let betas: Vec<f64> = if cfg.betas.is_empty() { DEFAULT_VERIFY_BETAS.to_vec() } else { cfg.betas.clone() };
    let tol = cfg.tol;
    let all: Vec<usize> = (0..s.n()).collect();
    let mut checks = Vec::new();
    let mut notices = Vec::new();

    for &beta in &betas {
        if beta <= 1.0 {
            notices.push(format!("beta {beta} is not above 1; closed-form and series checks skipped there"));
            continue;
        }
        let closed = y_beta(s, &a.dynamics, beta, &all)?;
        let series = y_beta_series(s, &a.dynamics, beta, &all, SERIES_TARGET)?;
        if series.tail_bound >= SERIES_CERTIFIED {
            notices.push(format!("beta {beta}: series tail bound {:.3e} is not certified", series.tail_bound));
            continue;
        }
        let scale = closed.y.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let diff = closed.y.iter().zip(&series.y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale;
        checks.push(check(format!("y_beta series at beta {beta}"), diff <= tol, diff, tol, json!({ "tail_bound": series.tail_bound, "terms": series.terms })));
    }

    let mut states = report_states(&a.report);
    for (i, st) in doc.states.iter().enumerate() {
        states.push(KmsStateVector {
            label: st.label.clone().unwrap_or_else(|| format!("input state {i}")),
            beta: st.beta,
            r: a.dynamics.r.clone(),
            m: st.m.clone(),
            epsilon: None,
            provenance: Provenance::Input,
            ck_flag: false,
        });
    }
    for st in &states {
        let rep = subinvariance_check(s, &a.dynamics, st.beta, &DVector::from_vec(st.m.clone()));
        // Largest negative entry of the product relation or the vector itself.
        let worst = rep.product.iter().chain(&st.m).map(|x| (-x).max(0.0)).fold(0.0, f64::max);
        checks.push(check(
            format!("{}: subinvariance", st.label),
            rep.passes(),
            worst,
            kgkms::kms::SUBINVARIANCE_TOL,
            json!({ "violations": rep.violations, "total_mass": st.m.iter().sum::<f64>() }),
        ));
    }

    match g {
        None => notices.push("skeleton-only input: path oracles skipped".into()),
        Some(g) => {
            for &beta in betas.iter().filter(|&&b| b > 1.0) {
                let y = y_beta(s, &a.dynamics, beta, &all)?;
                // Barycentre of the simplex of boundary vectors.
                let eps = DVector::from_iterator(s.n(), y.y.iter().map(|yv| 1.0 / (s.n() as f64 * yv)));
                for v in 0..s.n() {
                    let mut specs = Vec::new();
                    if !g.all_edges_at(v).is_empty() {
                        specs.push(("all edges", GapProjectionSpec::new(g, v, g.all_edges_at(v))));
                    }
                    for (c, name) in [(Color::Blue, "blue edges"), (Color::Red, "red edges")] {
                        if !g.edges_at(v, c).is_empty() {
                            specs.push((name, GapProjectionSpec::full_color(g, v, c)));
                        }
                    }
                    for (name, spec) in specs {
                        let spec = spec.map_err(|e| Failure::oracle(e.to_string()))?;
                        let val = gap_projection_value(g, &eps, beta, &a.dynamics.r, &spec).map_err(|e| Failure::oracle(e.to_string()))?;
                        checks.push(check(
                            format!("gap projection at {} ({name}), beta {beta}", s.name(v)),
                            val.difference <= tol,
                            val.difference,
                            tol,
                            json!(val),
                        ));
                    }
                }
            }
            for st in &states {
                let rep = kms_spot_check(g, st, SPOT_SAMPLES, SPOT_SEED, cfg.bound);
                let value = rep.max_violation.max(rep.positivity_violation);
                checks.push(check(format!("{}: KMS spot check", st.label), rep.passes(tol), value, tol, json!(rep)));
            }
        }
    }

    let failed = checks.iter().filter(|c| c["status"] == "fail").count();
    let code = if failed == 0 { EXIT_OK } else { EXIT_ORACLE };
    if failed > 0 {
        log::warn!("{failed} oracle checks failed");
    }
    Ok((
        code,
        json!({
            "command": "verify",
            "graph": graph_json(s, g),
            "passed": failed == 0,
            "failed": failed,
            "checks": checks,
            "notices": notices,
            "conditions": a.report.conditions,
        }),
    ))
}
