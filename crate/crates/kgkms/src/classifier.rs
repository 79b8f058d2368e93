//! Assembles the structural, spectral and state-level results into a phase
//! report: which KMS_β states exist for the preferred dynamics, for which β,
//! and which of them factor through Cuntz–Krieger quotients.

use crate::kms::{
    check_dominant_hypotheses, kms1_dominant_state, lift, simplex, subinvariance_check, Dynamics, KmsError, KmsStateVector,
    Provenance, SimplexDescription,
};
use crate::skeleton::Skeleton;
use crate::spectral::{independence_of_radii, SpectralSummary};
use crate::structure::{color_reach, complement, validate_two_component, AssumptionError, Decomposition};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifierError {
    #[error("colour-{color} reach set {h_j:?} of the critical component is not hereditary")]
    NotHereditary { color: usize, h_j: Vec<String> },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error(transparent)]
    Assumption(#[from] AssumptionError),
    #[error(transparent)]
    Kms(#[from] KmsError),
}

/// Removal of a hereditary set below a critical component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionStep {
    pub component: usize,
    pub color: usize,
    /// Vertices reached from the component by single-colour paths.
    pub h_j: Vec<usize>,
    /// `H_j` minus the component; every KMS₁ state vanishes here.
    pub removed: Vec<usize>,
    /// Vertex set of the quotient graph.
    pub remaining: Vec<usize>,
    /// Nothing is removed, so the reduction says nothing.
    pub vacuous: bool,
    pub justification: String,
}

fn names(s: &Skeleton, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| s.name(v).to_string()).collect()
}

fn set_text(s: &Skeleton, vs: &[usize]) -> String {
    format!("{{{}}}", names(s, vs).join(", "))
}

fn critical_preconditions(s: &Skeleton, summary: &SpectralSummary, c: usize, j: usize) -> Result<(), ClassifierError> {
    let sp = summary.component(c);
    if sp.trivial || !sp.coordinatewise_irreducible {
        return Err(ClassifierError::HypothesisViolation(format!(
            "component {} must be nontrivial and coordinatewise irreducible",
            set_text(s, &sp.vertices)
        )));
    }
    if !sp.critical[j] {
        return Err(ClassifierError::HypothesisViolation(format!("component {} is not {}-critical", set_text(s, &sp.vertices), j + 1)));
    }
    Ok(())
}

/// For a `j`-critical component `C`, every KMS₁ state vanishes on
/// `H_j \ C` whenever `H_j` is hereditary.
pub fn critical_reduction(s: &Skeleton, d: &Decomposition, summary: &SpectralSummary, c: usize, j: usize) -> Result<ReductionStep, ClassifierError> {
    critical_preconditions(s, summary, c, j)?;
    let cv = &d.component(c).vertices;
    let reach = color_reach(s, j, cv);
    let h_j: Vec<usize> = (0..s.n()).filter(|&v| reach[v]).collect();
    let removed: Vec<usize> = h_j.iter().copied().filter(|v| !cv.contains(v)).collect();
    if removed.is_empty() {
        return Ok(ReductionStep {
            component: c,
            color: j,
            remaining: (0..s.n()).collect(),
            h_j,
            removed,
            vacuous: true,
            justification: format!("no single-colour path of colour {} leaves {}; nothing to remove", j + 1, set_text(s, cv)),
        });
    }
    if !d.is_hereditary(&h_j) {
        return Err(ClassifierError::NotHereditary { color: j, h_j: names(s, &h_j) });
    }
    Ok(ReductionStep {
        component: c,
        color: j,
        remaining: complement(s.n(), &removed),
        justification: format!(
            "{} is {}-critical and coordinatewise irreducible, and its colour-{} reach set {} is hereditary; every KMS_1 state factors through the Toeplitz algebra of the quotient by {}",
            set_text(s, cv),
            j + 1,
            j + 1,
            set_text(s, &h_j),
            set_text(s, &removed)
        ),
        h_j,
        removed,
        vacuous: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaBound {
    pub component: usize,
    pub color: usize,
    /// Every KMS_β state has `β ≥ bound`.
    pub bound: f64,
}

/// `β ≥ 1` for every KMS_β state when some critical, coordinatewise
/// irreducible component has hereditary closure equal to all vertices.
pub fn beta_lower_bound(s: &Skeleton, d: &Decomposition, summary: &SpectralSummary, c: usize) -> Option<BetaBound> {
    let sp = summary.component(c);
    if sp.trivial || !sp.coordinatewise_irreducible {
        return None;
    }
    let j = sp.k_c.first().copied()?;
    (d.hereditary_closure(&sp.vertices).len() == s.n()).then_some(BetaBound { component: c, color: j, bound: 1.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapValue {
    pub color: usize,
    /// `(1 − ρ(A_{C,i})/ρ(A_i)) m_v` for each vertex of the component.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalClassification {
    pub component: usize,
    /// Colours in which the component is critical.
    pub k_c: Vec<usize>,
    /// The KMS₁ state supported on the component.
    pub state: KmsStateVector,
    /// Every KMS₁ state factors through the graph algebra of the component.
    pub factors_through_component_graph_algebra: bool,
    /// Nonzero gap-projection values for non-critical colours.
    pub gap_values: Vec<GapValue>,
    pub unique: bool,
    pub conclusions: Vec<String>,
    pub conditions: Vec<String>,
}

/// Classification at β = 1 for a `j`-critical component whose colour-`j`
/// reach set is every vertex.
pub fn classify_minimal(
    s: &Skeleton,
    summary: &SpectralSummary,
    dynamics: &Dynamics,
    c: usize,
    j: usize,
) -> Result<MinimalClassification, ClassifierError> {
    critical_preconditions(s, summary, c, j)?;
    if !dynamics.preferred {
        return Err(ClassifierError::HypothesisViolation("dynamics are not the preferred dynamics".into()));
    }
    let sp = summary.component(c);
    let reach = color_reach(s, j, &sp.vertices);
    if let Some(w) = reach.iter().position(|&b| !b) {
        return Err(ClassifierError::HypothesisViolation(format!(
            "vertex {} is not reached from {} by colour-{} paths",
            s.name(w),
            set_text(s, &sp.vertices),
            j + 1
        )));
    }
    let x = sp.pf_vector.clone().expect("coordinatewise irreducible");
    let m = lift(s.n(), &sp.vertices, &x);
    let k = s.k();
    let all_critical = sp.k_c.len() == k;
    let gap_values = (0..k)
        .filter(|i| !sp.critical[*i])
        .map(|i| {
            let f = 1.0 - sp.rho[i].value / summary.rho[i].value;
            GapValue { color: i, values: x.iter().map(|xv| f * xv).collect() }
        })
        .collect::<Vec<_>>();
    let verdict = independence_of_radii(&sp.rho);
    let mut conditions = Vec::new();
    let mut conclusions = vec![
        format!("every KMS_1 state factors through the Toeplitz algebra of the component {}", set_text(s, &sp.vertices)),
        format!(
            "and through its quotient by the gap projections of colours {:?}",
            sp.k_c.iter().map(|i| i + 1).collect::<Vec<_>>()
        ),
    ];
    if all_critical {
        conclusions.push("the component is critical in every colour, so every KMS_1 state factors through its graph algebra".into());
    }
    if let Some(cond) = verdict.condition() {
        conditions.push(format!("uniqueness and nonvanishing gap projections {cond}"));
    } else {
        conclusions.push("there is exactly one KMS_1 state".into());
        if !gap_values.is_empty() {
            conclusions.push("its gap projections of non-critical colours do not vanish".into());
        }
    }
    let state = KmsStateVector {
        label: format!("critical component {}", set_text(s, &sp.vertices)),
        beta: 1.0,
        r: dynamics.r.clone(),
        m,
        epsilon: None,
        provenance: Provenance::MinimalCritical,
        ck_flag: all_critical,
    };
    Ok(MinimalClassification {
        component: c,
        k_c: sp.k_c.clone(),
        state,
        factors_through_component_graph_algebra: all_critical,
        gap_values,
        unique: verdict.is_independent(),
        conclusions,
        conditions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationFlag {
    pub vertex: usize,
    /// The extreme point factors through the graph algebra of the target.
    pub factors: bool,
}

/// Vertices of `set` receiving no edges from inside `set`.
pub fn absolute_sources(s: &Skeleton, set: &[usize]) -> Vec<usize> {
    set.iter().copied().filter(|&v| s.matrices().iter().all(|m| set.iter().all(|&w| m.get(v, w) == 0))).collect()
}

/// An extreme point `δ_v / y_v` of a boundary simplex over `set` factors
/// through the graph algebra of `Λ_set` iff `v` is an absolute source there.
pub fn factorization_flags(s: &Skeleton, simplex: &SimplexDescription) -> Vec<FactorizationFlag> {
    let src = absolute_sources(s, &simplex.vertices);
    simplex.extreme_points.iter().map(|ep| FactorizationFlag { vertex: ep.vertex, factors: src.contains(&ep.vertex) }).collect()
}

/// A β interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaRange {
    /// `β > from`.
    Above { from: f64 },
    Point { at: f64 },
    /// `from < β < to`.
    Between { from: f64, to: f64 },
}

impl BetaRange {
    pub fn contains(&self, b: f64) -> bool {
        match *self {
            BetaRange::Above { from } => b > from,
            BetaRange::Point { at } => b == at,
            BetaRange::Between { from, to } => from < b && b < to,
        }
    }

    fn top(&self) -> f64 {
        match *self {
            BetaRange::Above { .. } => f64::INFINITY,
            BetaRange::Point { at } => at,
            BetaRange::Between { to, .. } => to,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Regime {
    pub beta: BetaRange,
    pub description: String,
    pub provenance: String,
    /// Dimension of the simplex of states; `Some(0)` for a unique state and
    /// `None` when the set is not determined.
    pub dimension: Option<usize>,
    /// Boundary simplices evaluated at sample inverse temperatures.
    pub simplices: Vec<SimplexDescription>,
    pub states: Vec<KmsStateVector>,
    pub factorization: Vec<FactorizationFlag>,
    pub conditions: Vec<String>,
}

impl Regime {
    fn new(beta: BetaRange, description: impl Into<String>, provenance: &str) -> Self {
        Self {
            beta,
            description: description.into(),
            provenance: provenance.into(),
            dimension: None,
            simplices: Vec::new(),
            states: Vec::new(),
            factorization: Vec::new(),
            conditions: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphCase {
    OneComponent,
    /// Two components with a critical component reaching every vertex.
    TwoComponentsCritical,
    /// Two components where the hereditary one dominates in every colour.
    TwoComponentsDominant,
    /// Three or more components, or assumptions outside the two cases.
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentFinding {
    pub component: usize,
    pub vertices: Vec<String>,
    pub lower_bound: Option<BetaBound>,
    pub reductions: Vec<ReductionStep>,
    pub minimal: Option<MinimalClassification>,
    pub dominant_state: Option<KmsStateVector>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    pub case: GraphCase,
    /// Ordered by decreasing β, pairwise disjoint.
    pub regimes: Vec<Regime>,
    /// Second critical inverse temperature, when there is one.
    pub beta_c: Option<f64>,
    pub lower_bound: Option<BetaBound>,
    pub findings: Vec<ComponentFinding>,
    /// The classification does not cover every β.
    pub incomplete: bool,
    pub conditions: Vec<String>,
    pub notes: Vec<String>,
}

const SUPERCRITICAL: &str = "boundary simplex for strictly supercritical inverse temperatures";
const LOWER_BOUND: &str = "lower bound from a critical component with full hereditary closure";
const MINIMAL: &str = "critical component reaching every vertex in one colour";
const DOMINANT: &str = "dominant hereditary component: convex hull of the extended eigenvector state and lifted quotient states";
const LIFTED: &str = "boundary simplex of the quotient by the dominant component, lifted";
const SECOND_CRITICAL: &str = "unique state at the second critical point of the quotient";

fn samples(betas: &[f64], range: BetaRange, default: f64) -> Vec<f64> {
    let mut v: Vec<f64> = betas.iter().copied().filter(|b| range.contains(*b)).collect();
    if v.is_empty() {
        v.push(default);
    }
    v
}

fn supercritical_regime(s: &Skeleton, dynamics: &Dynamics, betas: &[f64]) -> Result<Regime, ClassifierError> {
    let range = BetaRange::Above { from: 1.0 };
    let mut reg = Regime::new(range, format!("simplex of KMS states of dimension {} parametrized by boundary vectors", s.n() - 1), SUPERCRITICAL);
    reg.dimension = Some(s.n() - 1);
    let all: Vec<usize> = (0..s.n()).collect();
    for b in samples(betas, range, 2.0) {
        let sim = simplex(s, dynamics, b, &all)?;
        reg.factorization.extend(factorization_flags(s, &sim));
        reg.simplices.push(sim);
    }
    Ok(reg)
}

fn lifted_states(s: &Skeleton, sim: &SimplexDescription, dynamics: &Dynamics, flags: &[FactorizationFlag]) -> Vec<KmsStateVector> {
    sim.extreme_points
        .iter()
        .zip(flags)
        .map(|(ep, f)| {
            let mut eps = vec![0.0; sim.vertices.len()];
            let i = sim.vertices.iter().position(|&v| v == ep.vertex).unwrap();
            eps[i] = ep.epsilon;
            KmsStateVector {
                label: format!("lifted extreme point at {}", s.name(ep.vertex)),
                beta: sim.beta,
                r: dynamics.r.clone(),
                m: lift(s.n(), &sim.vertices, &ep.m),
                epsilon: Some(lift(s.n(), &sim.vertices, &eps)),
                provenance: Provenance::LiftedQuotient,
                ck_flag: f.factors,
            }
        })
        .collect()
}

/// The unique state at `β_c` of a quotient whose only nontrivial component
/// is `c`: the component's eigenvector, zero elsewhere.
fn second_critical_state(s: &Skeleton, summary: &SpectralSummary, dynamics: &Dynamics, c: usize, beta_c: f64) -> KmsStateVector {
    let sp = summary.component(c);
    let x = sp.pf_vector.clone().expect("coordinatewise irreducible");
    // Factoring through the component's graph algebra needs β_c r_i = ln ρ(A_{C,i}) in every colour.
    let ck = (0..s.k()).all(|i| (beta_c * dynamics.r[i] - sp.rho[i].value.ln()).abs() <= 1e-12 * dynamics.r[i].max(1.0));
    KmsStateVector {
        label: format!("second critical state on {}", set_text(s, &sp.vertices)),
        beta: beta_c,
        r: dynamics.r.clone(),
        m: lift(s.n(), &sp.vertices, &x),
        epsilon: None,
        provenance: Provenance::SecondCritical,
        ck_flag: ck,
    }
}

/// Phase report for two components `C` (reaching everything) and `D`.
pub fn two_component_phase_report(
    s: &Skeleton,
    d: &Decomposition,
    summary: &SpectralSummary,
    dynamics: &Dynamics,
    betas: &[f64],
) -> Result<PhaseReport, ClassifierError> {
    let two = validate_two_component(s, d)?;
    if !dynamics.preferred {
        return Err(ClassifierError::HypothesisViolation("dynamics are not the preferred dynamics".into()));
    }
    if !two.c_forwards_hereditary || !two.d_hereditary {
        return Err(AssumptionError::AssumptionFailed { tag: "A3", witness: "C must be forwards hereditary and D hereditary".into() }.into());
    }
    let (c, dc) = (two.c, two.d);
    let csp = summary.component(c);
    let mut regimes = vec![supercritical_regime(s, dynamics, betas)?];
    let mut conditions = Vec::new();
    let mut notes = Vec::new();
    let mut finding = ComponentFinding {
        component: c,
        vertices: names(s, &csp.vertices),
        lower_bound: None,
        reductions: Vec::new(),
        minimal: None,
        dominant_state: None,
        notes: Vec::new(),
    };
    if !two.monochromatic_connections {
        notes.push("some intermediate vertex is not joined to both components by paths of every colour".into());
    }

    if !csp.k_c.is_empty() {
        let lower_bound = beta_lower_bound(s, d, summary, c);
        finding.lower_bound = lower_bound.clone();
        for &j in &csp.k_c {
            match critical_reduction(s, d, summary, c, j) {
                Ok(step) => finding.reductions.push(step),
                Err(e) => finding.notes.push(e.to_string()),
            }
        }
        let full_j = csp.k_c.iter().copied().find(|&j| color_reach(s, j, &csp.vertices).iter().all(|&b| b));
        let mut one = Regime::new(BetaRange::Point { at: 1.0 }, "", MINIMAL);
        match full_j {
            Some(j) => {
                let min = classify_minimal(s, summary, dynamics, c, j)?;
                one.description = min.conclusions.join("; ");
                one.dimension = min.unique.then_some(0);
                one.conditions = min.conditions.clone();
                one.states.push(min.state.clone());
                conditions.extend(min.conditions.clone());
                finding.minimal = Some(min);
            }
            None => {
                one.description = "open: no critical colour reaches every vertex from the critical component, and the classification at beta = 1 is not determined".into();
                one.provenance = "not covered".into();
            }
        }
        regimes.push(one);
        if lower_bound.is_some() {
            let mut none = Regime::new(BetaRange::Between { from: 0.0, to: 1.0 }, "no KMS states", LOWER_BOUND);
            none.dimension = None;
            regimes.push(none);
        }
        let incomplete = full_j.is_none();
        return Ok(PhaseReport {
            case: GraphCase::TwoComponentsCritical,
            regimes,
            beta_c: None,
            lower_bound,
            findings: vec![finding],
            incomplete,
            conditions,
            notes,
        });
    }

    // No colour is critical for C, so D dominates in every colour.
    check_dominant_hypotheses(s, d, summary, dc)?;
    let (psi, _) = kms1_dominant_state(s, d, summary, dynamics, dc)?;
    let rest = complement(s.n(), &d.component(dc).vertices);
    let q = simplex(s, dynamics, 1.0, &rest)?;
    let flags = factorization_flags(s, &q);
    let mut one = Regime::new(
        BetaRange::Point { at: 1.0 },
        format!(
            "simplex of dimension {} spanned by the dominant state and the {}-dimensional lifted quotient simplex",
            rest.len(),
            q.dimension
        ),
        DOMINANT,
    );
    one.dimension = Some(rest.len());
    one.states.push(psi.clone());
    one.states.extend(lifted_states(s, &q, dynamics, &flags));
    one.factorization = flags;
    one.simplices.push(q);
    regimes.push(one);
    finding.dominant_state = Some(psi);

    let beta_c = (0..s.k()).map(|i| csp.rho[i].value.ln() / dynamics.r[i]).fold(f64::NEG_INFINITY, f64::max);
    let mid = BetaRange::Between { from: beta_c, to: 1.0 };
    let mut lifted = Regime::new(mid, format!("lifted simplex of dimension {}", rest.len() - 1), LIFTED);
    lifted.dimension = Some(rest.len() - 1);
    for b in samples(betas, mid, 0.5 * (beta_c + 1.0)) {
        let sim = simplex(s, dynamics, b, &rest)?;
        let fl = factorization_flags(s, &sim);
        lifted.states.extend(lifted_states(s, &sim, dynamics, &fl));
        lifted.factorization.extend(fl);
        lifted.simplices.push(sim);
    }
    regimes.push(lifted);

    let st = second_critical_state(s, summary, dynamics, c, beta_c);
    let mut crit = Regime::new(BetaRange::Point { at: beta_c }, "unique state, vanishing off the forwards hereditary component", SECOND_CRITICAL);
    crit.dimension = Some(0);
    let verdict = independence_of_radii(&csp.rho);
    if let Some(cond) = verdict.condition() {
        crit.conditions.push(format!("uniqueness {cond}"));
    }
    if !st.ck_flag {
        crit.conditions.push("does not vanish on the gap projections of colours with beta_c r_i > ln rho(A_{C,i})".into());
    }
    conditions.extend(crit.conditions.clone());
    crit.states.push(st);
    regimes.push(crit);
    notes.push("no statement is made for beta < beta_c".into());
    Ok(PhaseReport {
        case: GraphCase::TwoComponentsDominant,
        regimes,
        beta_c: Some(beta_c),
        lower_bound: None,
        findings: vec![finding],
        incomplete: false,
        conditions,
        notes,
    })
}

/// Report for a graph whose only nontrivial component reaches every vertex
/// by single-colour paths, or the general best-effort report otherwise.
pub fn classify(s: &Skeleton, d: &Decomposition, summary: &SpectralSummary, dynamics: &Dynamics, betas: &[f64]) -> Result<PhaseReport, ClassifierError> {
    let nt = d.nontrivial();
    log::debug!("classifying a graph with {} nontrivial components", nt.len());
    if nt.len() == 2 && validate_two_component(s, d).is_ok() {
        return two_component_phase_report(s, d, summary, dynamics, betas);
    }
    if nt.len() == 1 {
        let c = nt[0];
        let sp = summary.component(c);
        if sp.coordinatewise_irreducible {
            if let Some(j) = sp.k_c.iter().copied().find(|&j| color_reach(s, j, &sp.vertices).iter().all(|&b| b)) {
                let min = classify_minimal(s, summary, dynamics, c, j)?;
                let mut one = Regime::new(BetaRange::Point { at: 1.0 }, min.conclusions.join("; "), MINIMAL);
                one.dimension = min.unique.then_some(0);
                one.conditions = min.conditions.clone();
                one.states.push(min.state.clone());
                let lower_bound = beta_lower_bound(s, d, summary, c);
                let mut regimes = vec![supercritical_regime(s, dynamics, betas)?, one];
                if lower_bound.is_some() {
                    regimes.push(Regime::new(BetaRange::Between { from: 0.0, to: 1.0 }, "no KMS states", LOWER_BOUND));
                }
                return Ok(PhaseReport {
                    case: GraphCase::OneComponent,
                    regimes,
                    beta_c: None,
                    lower_bound,
                    findings: vec![ComponentFinding {
                        component: c,
                        vertices: names(s, &sp.vertices),
                        lower_bound: beta_lower_bound(s, d, summary, c),
                        reductions: Vec::new(),
                        minimal: Some(min.clone()),
                        dominant_state: None,
                        notes: Vec::new(),
                    }],
                    incomplete: false,
                    conditions: min.conditions,
                    notes: Vec::new(),
                });
            }
        }
    }
    general_report(s, d, summary, dynamics, betas)
}

/// Runs every individually applicable result per component; the global
/// classification is marked incomplete.
fn general_report(s: &Skeleton, d: &Decomposition, summary: &SpectralSummary, dynamics: &Dynamics, betas: &[f64]) -> Result<PhaseReport, ClassifierError> {
    let mut findings = Vec::new();
    let mut lower_bound = None;
    let mut conditions = Vec::new();
    let mut states = Vec::new();
    for c in d.nontrivial() {
        let sp = summary.component(c);
        let mut f = ComponentFinding {
            component: c,
            vertices: names(s, &sp.vertices),
            lower_bound: beta_lower_bound(s, d, summary, c),
            reductions: Vec::new(),
            minimal: None,
            dominant_state: None,
            notes: Vec::new(),
        };
        if lower_bound.is_none() {
            lower_bound = f.lower_bound.clone();
        }
        if sp.coordinatewise_irreducible {
            for &j in &sp.k_c {
                match critical_reduction(s, d, summary, c, j) {
                    Ok(step) => f.reductions.push(step),
                    Err(e) => f.notes.push(e.to_string()),
                }
                if f.minimal.is_none() && color_reach(s, j, &sp.vertices).iter().all(|&b| b) {
                    let min = classify_minimal(s, summary, dynamics, c, j)?;
                    conditions.extend(min.conditions.clone());
                    states.push(min.state.clone());
                    f.minimal = Some(min);
                }
            }
            if check_dominant_hypotheses(s, d, summary, c).is_ok() {
                match kms1_dominant_state(s, d, summary, dynamics, c) {
                    Ok((st, _)) => {
                        states.push(st.clone());
                        f.dominant_state = Some(st);
                    }
                    Err(e) => f.notes.push(e.to_string()),
                }
            }
        } else {
            f.notes.push("component is not coordinatewise irreducible".into());
        }
        findings.push(f);
    }
    let mut regimes = vec![supercritical_regime(s, dynamics, betas)?];
    let mut one = Regime::new(BetaRange::Point { at: 1.0 }, "partial: states found by the individually applicable results", "per-component results");
    one.states = states;
    one.conditions = conditions.clone();
    regimes.push(one);
    let n = d.nontrivial().len();
    Ok(PhaseReport {
        case: GraphCase::General,
        regimes,
        beta_c: None,
        lower_bound,
        findings,
        incomplete: true,
        conditions,
        notes: vec![format!("INCOMPLETE: {n} nontrivial components; classification at and below beta = 1 is partial")],
    })
}

/// Checks that every state listed in the report satisfies subinvariance at
/// its inverse temperature; returns the labels of those that do not.
pub fn failing_states(s: &Skeleton, report: &PhaseReport) -> Vec<String> {
    report
        .regimes
        .iter()
        .flat_map(|r| &r.states)
        .filter_map(|st| {
            let dy = Dynamics { r: st.r.clone(), preferred: true, normalized: true };
            (!subinvariance_check(s, &dy, st.beta, &st.m_vector()).passes()).then(|| st.label.clone())
        })
        .collect()
}

/// Regimes are disjoint and listed by decreasing β.
pub fn regimes_ordered(report: &PhaseReport) -> bool {
    report.regimes.windows(2).all(|w| {
        let upper_low = match w[0].beta {
            BetaRange::Above { from } => from,
            BetaRange::Point { at } => at,
            BetaRange::Between { from, .. } => from,
        };
        w[1].beta.top() <= upper_low
    })
}
