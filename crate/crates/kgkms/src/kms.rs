//! Dynamics, subinvariance, the `y^β` normalizer and the simplices of
//! boundary vectors, the eigenvector extension from a dominant hereditary
//! component, the dominant KMS₁ state and the decomposition of KMS₁ vertex
//! vectors.
//!
//! A state is represented by its vertex vector `m` (`m_v = φ(q_v)`); on
//! spanning elements it is `φ(t_μ t_ν*) = δ_{μ,ν} e^{−βr·d(μ)} m_{s(μ)}`.

use crate::matrix::{apply_gap_product, apply_resolvent_product, condition_number, norm_inf};
use crate::skeleton::{Degree, Skeleton};
use crate::spectral::{spectral_radius, SpectralSummary};
use crate::structure::{complement, Decomposition};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

/// Entrywise slack allowed in subinvariance, relative to `‖m‖∞`.
pub const SUBINVARIANCE_TOL: f64 = 1e-10;
/// Agreement of the defining formulas of the extension, and its eigen-residual.
pub const EXTENSION_TOL: f64 = 1e-9;
/// Tolerance in the decomposition of KMS₁ vertex vectors.
pub const DECOMPOSITION_TOL: f64 = 1e-9;
/// Condition numbers above this are reported.
pub const CONDITION_WARN: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KmsError {
    #[error("some radius is at most 1 (colour {}, radius {rho}): a coordinate graph is a union of cycles", .color + 1)]
    CycleGraph { color: usize, rho: f64 },
    #[error("rates must be positive and finite")]
    BadRates,
    #[error("not strictly supercritical in colour {}: beta*r = {lhs}, ln rho = {rhs}", .color + 1)]
    Subcritical { color: usize, lhs: f64, rhs: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("the defining formulas disagree by {0:e}")]
    ExtensionMismatch(f64),
    #[error("eigen-residual {0:e} too large")]
    Residual(f64),
    #[error("not a KMS_1 vertex vector: {0}")]
    NotAState(String),
    #[error("tail bound cannot be certified: {0}")]
    TailBoundFailure(String),
    #[error("singular linear system")]
    Singular,
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dynamics {
    pub r: Vec<f64>,
    /// `r_i = ln ρ(A_i)` for all `i`.
    pub preferred: bool,
    /// `max_i r_i⁻¹ ln ρ(A_i) = 1`.
    pub normalized: bool,
}

impl Dynamics {
    /// Rates `r_i = ln ρ(A_i)`.
    pub fn preferred(summary: &SpectralSummary) -> Result<Self, KmsError> {
        for (i, rho) in summary.rho.iter().enumerate() {
            if rho.exact.map_or(rho.value <= 1.0 + 1e-12, |e| e <= 1) {
                return Err(KmsError::CycleGraph { color: i, rho: rho.value });
            }
        }
        Ok(Self { r: summary.rho.iter().map(|r| r.value.ln()).collect(), preferred: true, normalized: true })
    }

    /// Arbitrary positive rates, with the flags computed against the radii.
    pub fn with_rates(r: Vec<f64>, summary: &SpectralSummary) -> Result<Self, KmsError> {
        if r.len() != summary.rho.len() || r.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(KmsError::BadRates);
        }
        let ln: Vec<f64> = summary.rho.iter().map(|x| x.value.ln()).collect();
        let preferred = r.iter().zip(&ln).all(|(a, b)| (a - b).abs() <= 1e-12 * b.abs().max(1.0));
        let max = r.iter().zip(&ln).map(|(a, b)| b / a).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { r, preferred, normalized: (max - 1.0).abs() <= 1e-12 })
    }

    /// `e^{−β r_i}` for each colour.
    pub fn weights(&self, beta: f64) -> Vec<f64> {
        self.r.iter().map(|r| (-beta * r).exp()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Colour of a single-coordinate check, `None` for the product check.
    pub color: Option<usize>,
    pub vertex: usize,
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubinvarianceReport {
    /// `slack[i][v] = e^{βr_i} m_v − (A_i m)_v`.
    pub slack: Vec<Vec<f64>>,
    /// `∏_i (1 − e^{−βr_i} A_i) m`.
    pub product: Vec<f64>,
    pub violations: Vec<Violation>,
}

impl SubinvarianceReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `A_i m ≤ e^{βr_i} m` for every colour and `∏(1 − e^{−βr_i}A_i) m ≥ 0`.
pub fn subinvariance_check(s: &Skeleton, dynamics: &Dynamics, beta: f64, m: &DVector<f64>) -> SubinvarianceReport {
    let mats = s.matrices_f64();
    let tol = SUBINVARIANCE_TOL * norm_inf(m).max(f64::MIN_POSITIVE);
    let mut violations = Vec::new();
    let mut slack = Vec::new();
    for (i, a) in mats.iter().enumerate() {
        let lhs = a * m;
        let scale = (beta * dynamics.r[i]).exp();
        let sl: Vec<f64> = (0..m.len()).map(|v| scale * m[v] - lhs[v]).collect();
        for (v, &x) in sl.iter().enumerate() {
            // Compare after scaling back so the tolerance is on m's scale.
            if x / scale < -tol {
                violations.push(Violation { color: Some(i), vertex: v, amount: -x / scale });
            }
        }
        slack.push(sl);
    }
    let product = apply_gap_product(&mats, &dynamics.weights(beta), m);
    for v in 0..m.len() {
        if product[v] < -tol {
            violations.push(Violation { color: None, vertex: v, amount: -product[v] });
        }
    }
    SubinvarianceReport { slack, product: product.iter().copied().collect(), violations }
}

fn restricted(s: &Skeleton, set: &[usize]) -> Vec<DMatrix<f64>> {
    s.matrices().iter().map(|m| m.restrict(set).to_f64()).collect()
}

/// Errors unless `β r_i > ln ρ(A_{S,i})` for every colour.
pub fn check_supercritical(s: &Skeleton, dynamics: &Dynamics, beta: f64, set: &[usize]) -> Result<(), KmsError> {
    for (i, a) in restricted(s, set).iter().enumerate() {
        let rho = spectral_radius(a)?;
        let lhs = beta * dynamics.r[i];
        if rho > 0.0 && lhs <= rho.ln() + 1e-12 {
            return Err(KmsError::Subcritical { color: i, lhs, rhs: rho.ln() });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YBeta {
    pub beta: f64,
    /// Original indices of the vertex set, sorted.
    pub vertices: Vec<usize>,
    pub y: Vec<f64>,
    /// Condition numbers of the factors, when above the warning threshold.
    pub ill_conditioned: Vec<(usize, f64)>,
}

/// `y^β_v = Σ_{μ ∈ Λ_S v} e^{−βr·d(μ)}`, by direct solves of
/// `∏(1 − e^{−βr_i} A_{S,i}ᵀ) y = 𝟙`.
pub fn y_beta(s: &Skeleton, dynamics: &Dynamics, beta: f64, set: &[usize]) -> Result<YBeta, KmsError> {
    check_supercritical(s, dynamics, beta, set)?;
    let mats: Vec<DMatrix<f64>> = restricted(s, set).into_iter().map(|m| m.transpose()).collect();
    let w = dynamics.weights(beta);
    let ones = DVector::from_element(set.len(), 1.0);
    let y = apply_resolvent_product(&mats, &w, &ones).ok_or(KmsError::Singular)?;
    let ill_conditioned = mats
        .iter()
        .zip(&w)
        .enumerate()
        .map(|(i, (m, &c))| (i, condition_number(m, c)))
        .filter(|&(_, c)| c > CONDITION_WARN)
        .collect::<Vec<_>>();
    for (i, c) in &ill_conditioned {
        log::warn!("colour {} resolvent at beta {beta} has condition number {c:.3e}", i + 1);
    }
    Ok(YBeta { beta, vertices: set.to_vec(), y: y.iter().copied().collect(), ill_conditioned })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesResult {
    pub y: Vec<f64>,
    /// Certified bound on the omitted terms, entrywise.
    pub tail_bound: f64,
    /// Truncation degree per colour.
    pub terms: Vec<usize>,
}

/// Truncated path sum for `y^β` over a box of degrees, with a certified
/// tail bound.
pub fn y_beta_series(s: &Skeleton, dynamics: &Dynamics, beta: f64, set: &[usize], target_tail: f64) -> Result<SeriesResult, KmsError> {
    check_supercritical(s, dynamics, beta, set)?;
    let mats: Vec<DMatrix<f64>> = restricted(s, set).into_iter().map(|m| m.transpose()).collect();
    neumann_series(&mats, &dynamics.weights(beta), &DVector::from_element(set.len(), 1.0), target_tail)
}

/// `Σ_{n ∈ box} ∏ (q_i A_i)^{n_i} v` for commuting nonnegative `A_i` and
/// `v ≥ 0`. The omitted terms are bounded through a positive vector `w`
/// with `A_i w ≤ λ_i w` and `q_i λ_i < 1`.
pub fn neumann_series(mats: &[DMatrix<f64>], q: &[f64], v: &DVector<f64>, target_tail: f64) -> Result<SeriesResult, KmsError> {
    const MAX_TERMS: usize = 5_000_000;
    let n = v.len();
    let k = mats.len();
    if v.iter().any(|&x| x < 0.0) {
        return Err(KmsError::TailBoundFailure("vector has negative entries".into()));
    }
    let mut sig = Vec::with_capacity(k);
    for (a, &qi) in mats.iter().zip(q) {
        let rho = spectral_radius(a)?;
        let t = (qi * rho).sqrt().max(0.01);
        sig.push(qi / t);
    }
    let w = apply_resolvent_product(mats, &sig, &DVector::from_element(n, 1.0)).ok_or(KmsError::Singular)?;
    if w.iter().any(|&x| !(x >= 1.0 - 1e-12)) {
        return Err(KmsError::TailBoundFailure("comparison vector not positive".into()));
    }
    let mut t = Vec::with_capacity(k);
    for (a, &qi) in mats.iter().zip(q) {
        let aw = a * &w;
        let lam = (0..n).map(|i| aw[i] / w[i]).fold(0.0, f64::max);
        let ti = qi * lam * (1.0 + 1e-12);
        if ti >= 1.0 {
            return Err(KmsError::TailBoundFailure(format!("decay ratio {ti} is not below 1")));
        }
        t.push(ti);
    }
    let scale = norm_inf(&w) * norm_inf(v);
    let total: f64 = t.iter().map(|ti| 1.0 / (1.0 - ti)).product();
    let mut terms = Vec::with_capacity(k);
    for &ti in &t {
        let share = target_tail / (k as f64 * scale.max(f64::MIN_POSITIVE) * total * 2.0);
        let ni = if ti == 0.0 || share >= 1.0 { 0 } else { (share.ln() / ti.ln()).ceil().max(0.0) as usize };
        if ni > MAX_TERMS {
            return Err(KmsError::TailBoundFailure(format!("needs {ni} terms")));
        }
        terms.push(ni);
    }
    let kept: f64 = t.iter().zip(&terms).map(|(ti, &ni)| (1.0 - ti.powi(ni as i32 + 1)) / (1.0 - ti)).product();
    let tail_bound = scale * (total - kept).max(0.0);
    log::debug!("series truncated at {terms:?} terms, tail bound {tail_bound:.3e}");
    let mut y = v.clone();
    for ((a, &qi), &ni) in mats.iter().zip(q).zip(&terms) {
        let mut term = y.clone();
        let mut acc = y.clone();
        for _ in 0..ni {
            term = a * &term * qi;
            acc += &term;
        }
        y = acc;
    }
    Ok(SeriesResult { y: y.iter().copied().collect(), tail_bound, terms })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremePoint {
    pub vertex: usize,
    /// `1 / y^β_v`, the single nonzero entry of ε.
    pub epsilon: f64,
    /// Vertex vector over the simplex's vertex set.
    pub m: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexDescription {
    pub beta: f64,
    pub vertices: Vec<usize>,
    pub y_beta: Vec<f64>,
    pub extreme_points: Vec<ExtremePoint>,
    pub dimension: usize,
}

/// `{ε ≥ 0 : ε·y^β = 1}` on `set`, with extreme points `δ_v / y^β_v`.
pub fn simplex(s: &Skeleton, dynamics: &Dynamics, beta: f64, set: &[usize]) -> Result<SimplexDescription, KmsError> {
    let yb = y_beta(s, dynamics, beta, set)?;
    let n = set.len();
    let mut extreme_points = Vec::with_capacity(n);
    for (i, &v) in set.iter().enumerate() {
        let mut eps = DVector::zeros(n);
        eps[i] = 1.0 / yb.y[i];
        let m = epsilon_to_m(s, dynamics, beta, &eps, set)?;
        extreme_points.push(ExtremePoint { vertex: v, epsilon: eps[i], m: m.iter().copied().collect() });
    }
    Ok(SimplexDescription { beta, vertices: set.to_vec(), y_beta: yb.y, extreme_points, dimension: n.saturating_sub(1) })
}

/// `m = ∏(1 − e^{−βr_i} A_{S,i})⁻¹ ε`.
pub fn epsilon_to_m(s: &Skeleton, dynamics: &Dynamics, beta: f64, eps: &DVector<f64>, set: &[usize]) -> Result<DVector<f64>, KmsError> {
    check_supercritical(s, dynamics, beta, set)?;
    apply_resolvent_product(&restricted(s, set), &dynamics.weights(beta), eps).ok_or(KmsError::Singular)
}

/// `ε = ∏(1 − e^{−βr_i} A_{S,i}) m`; defined at every β.
pub fn m_to_epsilon(s: &Skeleton, dynamics: &Dynamics, beta: f64, m: &DVector<f64>, set: &[usize]) -> DVector<f64> {
    apply_gap_product(&restricted(s, set), &dynamics.weights(beta), m)
}

/// Solutions of the extension equations for each colour.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockExtension {
    /// `y_i = (ρ_i − E_i)⁻¹ B_i x` for each colour.
    pub per_color: Vec<DVector<f64>>,
    /// Largest pairwise ∞-distance, relative to `max(‖y‖∞, 1)`.
    pub disagreement: f64,
    pub conditions: Vec<f64>,
}

/// Extends an eigenvector `x` of the lower-right blocks to the upper blocks
/// of commuting block upper-triangular matrices `[[E_i, B_i], [0, A_i]]`.
pub fn extend_blocks(e: &[DMatrix<f64>], b: &[DMatrix<f64>], x: &DVector<f64>, rho_d: &[f64]) -> Result<BlockExtension, KmsError> {
    let nf = e.first().map_or(0, |m| m.nrows());
    let mut per_color = Vec::with_capacity(e.len());
    let mut conditions = Vec::with_capacity(e.len());
    for ((ei, bi), &r) in e.iter().zip(b).zip(rho_d) {
        if nf == 0 {
            per_color.push(DVector::zeros(0));
            conditions.push(1.0);
            continue;
        }
        let f = DMatrix::<f64>::identity(nf, nf) * r - ei;
        conditions.push(condition_number(ei, -1.0 / r));
        let y = f.lu().solve(&(bi * x)).ok_or(KmsError::Singular)?;
        per_color.push(y);
    }
    let scale = per_color.iter().map(norm_inf).fold(1.0, f64::max);
    let mut disagreement = 0.0f64;
    for i in 0..per_color.len() {
        for j in i + 1..per_color.len() {
            disagreement = disagreement.max(norm_inf(&(&per_color[i] - &per_color[j])) / scale);
        }
    }
    Ok(BlockExtension { per_color, disagreement, conditions })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionResult {
    /// Vertices that reach the dominant component but are not in it.
    pub f: Vec<usize>,
    pub d: Vec<usize>,
    /// Vertices that do not reach the dominant component.
    pub h: Vec<usize>,
    pub rho_d: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `(y, x, 0)` in original vertex order, unnormalized.
    pub z: Vec<f64>,
    pub b: f64,
    pub disagreement: f64,
    pub residuals: Vec<f64>,
    pub ill_conditioned: Vec<(usize, f64)>,
}

impl ExtensionResult {
    pub fn normalized(&self) -> DVector<f64> {
        DVector::from_iterator(self.z.len(), self.z.iter().map(|z| z / self.b))
    }
}

/// Extends the Perron–Frobenius vector of a hereditary component `dcomp`
/// dominating every component upstream of it to a common eigenvector of the
/// whole family.
pub fn extend_pf_eigenvector(s: &Skeleton, d: &Decomposition, summary: &SpectralSummary, dcomp: usize) -> Result<ExtensionResult, KmsError> {
    let comp = d.component(dcomp);
    let sp = summary.component(dcomp);
    if comp.trivial {
        return Err(KmsError::HypothesisViolation("component is trivial".into()));
    }
    let dv = comp.vertices.clone();
    let dname = s.name(dv[0]).to_string();
    if !d.is_hereditary(&dv) {
        return Err(KmsError::HypothesisViolation(format!("component at {dname} is not hereditary")));
    }
    let Some(x) = sp.pf_vector.clone() else {
        return Err(KmsError::HypothesisViolation(format!("component at {dname} is not coordinatewise irreducible")));
    };
    for c in d.nontrivial() {
        if c == dcomp || !d.comp_reaches(c, dcomp) {
            continue;
        }
        for i in 0..s.k() {
            if !sp.rho[i].greater(&summary.component(c).rho[i]) {
                return Err(KmsError::HypothesisViolation(format!(
                    "colour {} radius of component at {dname} ({}) does not exceed that of upstream component at {} ({})",
                    i + 1,
                    sp.rho[i].value,
                    s.name(d.component(c).vertices[0]),
                    summary.component(c).rho[i].value
                )));
            }
        }
    }
    let h: Vec<usize> = (0..s.n()).filter(|&v| !d.reaches(v, dv[0])).collect();
    let f: Vec<usize> = (0..s.n()).filter(|v| !dv.contains(v) && !h.contains(v)).collect();
    let rho_d: Vec<f64> = sp.rho.iter().map(|r| r.value).collect();
    let e: Vec<DMatrix<f64>> = s.matrices().iter().map(|m| m.block_f64(&f, &f)).collect();
    let b: Vec<DMatrix<f64>> = s.matrices().iter().map(|m| m.block_f64(&f, &dv)).collect();
    let xv = DVector::from_vec(x.clone());
    let ext = extend_blocks(&e, &b, &xv, &rho_d)?;
    if ext.disagreement > EXTENSION_TOL {
        return Err(KmsError::ExtensionMismatch(ext.disagreement));
    }
    let y = ext.per_color.first().cloned().unwrap_or_else(|| DVector::zeros(0));
    if y.iter().any(|&t| t < -EXTENSION_TOL * norm_inf(&y).max(1.0)) {
        return Err(KmsError::HypothesisViolation("extension has negative entries".into()));
    }
    let mut z = vec![0.0; s.n()];
    for (i, &v) in f.iter().enumerate() {
        z[v] = y[i].max(0.0);
    }
    for (i, &v) in dv.iter().enumerate() {
        z[v] = x[i];
    }
    let zv = DVector::from_vec(z.clone());
    let residuals: Vec<f64> = s.matrices_f64().iter().zip(&rho_d).map(|(a, &r)| norm_inf(&(a * &zv - &zv * r)) / norm_inf(&zv)).collect();
    if let Some(&worst) = residuals.iter().find(|&&r| r > EXTENSION_TOL) {
        return Err(KmsError::Residual(worst));
    }
    let ill_conditioned: Vec<(usize, f64)> = ext.conditions.iter().copied().enumerate().filter(|&(_, c)| c > CONDITION_WARN).collect();
    if !ill_conditioned.is_empty() {
        log::warn!("extension solves are ill-conditioned: {ill_conditioned:?}");
    }
    Ok(ExtensionResult {
        b: z.iter().sum(),
        f,
        d: dv,
        h,
        rho_d,
        x,
        y: y.iter().copied().collect(),
        z,
        disagreement: ext.disagreement,
        residuals,
        ill_conditioned,
    })
}

/// Where a state vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Boundary vector in a supercritical simplex.
    BoundarySimplex,
    /// Extension of the dominant component's eigenvector.
    DominantExtension,
    /// Boundary state of the quotient by the dominant component, lifted.
    LiftedQuotient,
    /// Unique state supported on a critical component that reaches everything.
    MinimalCritical,
    /// Unique state at the second critical inverse temperature.
    SecondCritical,
    /// Supplied by the user.
    Input,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmsStateVector {
    pub label: String,
    pub beta: f64,
    pub r: Vec<f64>,
    /// Full vertex vector, `m_v = φ(q_v)`.
    pub m: Vec<f64>,
    pub epsilon: Option<Vec<f64>>,
    pub provenance: Provenance,
    /// Factors through the Cuntz–Krieger quotient.
    pub ck_flag: bool,
}

impl KmsStateVector {
    /// `φ(t_μ t_μ*) = e^{−βr·d(μ)} m_{s(μ)}`.
    pub fn diagonal_value(&self, degree: &Degree, source: usize) -> f64 {
        (-self.beta * degree.dot(&self.r)).exp() * self.m[source]
    }

    /// Value on `t_μ t_ν*` given whether the paths coincide.
    pub fn spanning_value(&self, same_path: bool, degree: &Degree, source: usize) -> f64 {
        if same_path {
            self.diagonal_value(degree, source)
        } else {
            0.0
        }
    }

    pub fn m_vector(&self) -> DVector<f64> {
        DVector::from_vec(self.m.clone())
    }
}

/// The KMS₁ state whose vertex vector is the normalized extension `b⁻¹z`.
pub fn kms1_dominant_state(
    s: &Skeleton,
    d: &Decomposition,
    summary: &SpectralSummary,
    dynamics: &Dynamics,
    dcomp: usize,
) -> Result<(KmsStateVector, ExtensionResult), KmsError> {
    if !dynamics.preferred {
        return Err(KmsError::HypothesisViolation("dynamics are not the preferred dynamics".into()));
    }
    let ext = extend_pf_eigenvector(s, d, summary, dcomp)?;
    let m = ext.normalized();
    let ck_flag = s
        .matrices_f64()
        .iter()
        .zip(&summary.rho)
        .all(|(a, r)| norm_inf(&(a * &m - &m * r.value)) <= EXTENSION_TOL);
    let all: Vec<usize> = (0..s.n()).collect();
    let eps = m_to_epsilon(s, dynamics, 1.0, &m, &all);
    let state = KmsStateVector {
        label: format!("dominant extension from {}", s.name(ext.d[0])),
        beta: 1.0,
        r: dynamics.r.clone(),
        m: m.iter().copied().collect(),
        epsilon: Some(eps.iter().copied().collect()),
        provenance: Provenance::DominantExtension,
        ck_flag,
    };
    Ok((state, ext))
}

/// Checks that `dcomp` is hereditary, critical in every colour and strictly
/// dominates every other nontrivial component in every colour.
pub fn check_dominant_hypotheses(s: &Skeleton, d: &Decomposition, summary: &SpectralSummary, dcomp: usize) -> Result<(), KmsError> {
    let sp = summary.component(dcomp);
    if sp.trivial || !d.is_hereditary(&sp.vertices) {
        return Err(KmsError::HypothesisViolation("dominant set must be a nontrivial hereditary component".into()));
    }
    for i in 0..s.k() {
        if !sp.critical[i] {
            return Err(KmsError::HypothesisViolation(format!("component is not critical in colour {}", i + 1)));
        }
        for c in d.nontrivial() {
            if c != dcomp && !sp.rho[i].greater(&summary.component(c).rho[i]) {
                return Err(KmsError::HypothesisViolation(format!(
                    "colour {} radius does not strictly dominate the component at {}",
                    i + 1,
                    s.name(d.component(c).vertices[0])
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kms1Decomposition {
    /// Weight of the dominant state.
    pub a: f64,
    /// Vertices outside the dominant component.
    pub rest: Vec<usize>,
    /// Normalized remainder on `rest`, absent when `a = 1`.
    pub kappa: Option<Vec<f64>>,
    /// Boundary vector of the remainder, absent when `a = 1`.
    pub epsilon: Option<Vec<f64>>,
}

/// Writes a KMS₁ vertex vector as `a·m^ψ + (1 − a)·(lift of κ)`.
pub fn decompose_kms1(
    s: &Skeleton,
    d: &Decomposition,
    summary: &SpectralSummary,
    dynamics: &Dynamics,
    dcomp: usize,
    m_theta: &DVector<f64>,
) -> Result<Kms1Decomposition, KmsError> {
    check_dominant_hypotheses(s, d, summary, dcomp)?;
    let (psi, ext) = kms1_dominant_state(s, d, summary, dynamics, dcomp)?;
    let tol = DECOMPOSITION_TOL;
    let mpsi = psi.m_vector();
    let dv = &ext.d;
    let a = ext.b * dv.iter().map(|&v| m_theta[v]).sum::<f64>();
    for (i, &v) in dv.iter().enumerate() {
        if (m_theta[v] - a * ext.x[i] / ext.b).abs() > tol {
            return Err(KmsError::NotAState(format!("restriction to the dominant component is not proportional to its eigenvector at {}", s.name(v))));
        }
    }
    if a > 1.0 + tol {
        return Err(KmsError::NotAState(format!("dominant weight {a} exceeds 1")));
    }
    let a = a.clamp(0.0, 1.0);
    let rest = complement(s.n(), dv);
    if 1.0 - a <= tol {
        let dist = norm_inf(&(m_theta - &mpsi));
        if dist > tol {
            return Err(KmsError::NotAState(format!("full weight on the dominant state but distance {dist:e} from it")));
        }
        return Ok(Kms1Decomposition { a: 1.0, rest, kappa: None, epsilon: None });
    }
    let kappa = DVector::from_iterator(rest.len(), rest.iter().map(|&v| (m_theta[v] - a * mpsi[v]) / (1.0 - a)));
    if let Some(i) = (0..kappa.len()).find(|&i| kappa[i] < -tol) {
        return Err(KmsError::NotAState(format!("negative remainder at {}", s.name(rest[i]))));
    }
    let norm: f64 = kappa.sum();
    if (norm - 1.0).abs() > tol {
        return Err(KmsError::NotAState(format!("remainder has mass {norm}")));
    }
    let eps = m_to_epsilon(s, dynamics, 1.0, &kappa, &rest);
    if let Some(i) = (0..eps.len()).find(|&i| eps[i] < -tol) {
        return Err(KmsError::NotAState(format!("negative boundary value at {}", s.name(rest[i]))));
    }
    Ok(Kms1Decomposition {
        a: if a <= tol { 0.0 } else { a },
        rest,
        kappa: Some(kappa.iter().copied().collect()),
        epsilon: Some(eps.iter().copied().collect()),
    })
}

/// Extends a vector on `set` by zero to all vertices.
pub fn lift(n: usize, set: &[usize], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, &x) in set.iter().enumerate() {
        out[x] = v[i];
    }
    out
}
