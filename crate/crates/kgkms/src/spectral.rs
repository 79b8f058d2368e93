//! Spectral radii and Perron–Frobenius vectors of nonnegative matrices,
//! per-component radii, criticality, and rational independence of
//! logarithms of spectral radii.

use crate::matrix::IntMatrix;
use crate::skeleton::Skeleton;
use crate::structure::{coordinatewise_irreducible, strongly_connected, Decomposition};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

/// Relative tolerance for the bracketing of a spectral radius.
pub const RADIUS_TOL: f64 = 1e-12;
/// Relative tolerance for deciding two radii are equal.
pub const CRITICAL_TOL: f64 = 1e-9;
/// Residual allowed for a common Perron–Frobenius vector.
pub const PF_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix is not square and nonnegative")]
    NotNonnegative,
    #[error("power iteration did not converge (bracket [{lo}, {hi}])")]
    ConvergenceFailure { lo: f64, hi: f64 },
    #[error("common Perron-Frobenius vector fails for colour {color}: residual {residual:e}")]
    VerificationFailed { color: usize, residual: f64 },
    #[error("component is not coordinatewise irreducible")]
    Reducible,
}

/// Collatz–Wielandt bounds `min (Bx)_i/x_i ≤ ρ ≤ max (Bx)_i/x_i` for `x > 0`.
fn cw_bounds(b: &DMatrix<f64>, x: &DVector<f64>) -> (f64, f64) {
    let y = b * x;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for i in 0..x.len() {
        let q = y[i] / x[i];
        lo = lo.min(q);
        hi = hi.max(q);
    }
    (lo, hi)
}

/// Perron root and ℓ¹-normalized positive eigenvector of an irreducible
/// nonnegative matrix.
///
/// Power iteration on `B + I` (primitive, same eigenvector) narrows the
/// Collatz–Wielandt bracket; shifted inverse iteration with the shift kept
/// above the upper bound then closes it.
pub fn perron(b: &DMatrix<f64>) -> Result<(f64, DVector<f64>), SpectralError> {
    let n = b.nrows();
    if n == 1 {
        return Ok((b[(0, 0)], DVector::from_element(1, 1.0)));
    }
    let shifted = b + DMatrix::<f64>::identity(n, n);
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let (mut lo, mut hi) = cw_bounds(b, &x);
    let converged = |lo: f64, hi: f64| hi - lo <= RADIUS_TOL * 0.5 * hi.max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        if converged(lo, hi) {
            break;
        }
        x = &shifted * &x;
        x /= x.sum();
        (lo, hi) = cw_bounds(b, &x);
    }
    let mut iter = 0;
    while !converged(lo, hi) {
        iter += 1;
        if iter > 100 {
            return Err(SpectralError::ConvergenceFailure { lo, hi });
        }
        let sigma = hi + (hi - lo).max(1e-9 * hi).max(1e-300);
        let f = DMatrix::<f64>::identity(n, n) * sigma - b;
        let Some(y) = f.lu().solve(&x) else {
            return Err(SpectralError::ConvergenceFailure { lo, hi });
        };
        let y = y.map(f64::abs);
        if y.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
            return Err(SpectralError::ConvergenceFailure { lo, hi });
        }
        let (l2, h2) = cw_bounds(b, &(&y / y.sum()));
        if h2 - l2 >= hi - lo && iter > 3 {
            // No further progress possible in floating point.
            if hi - lo <= 1e3 * RADIUS_TOL * hi {
                break;
            }
            return Err(SpectralError::ConvergenceFailure { lo, hi });
        }
        x = &y / y.sum();
        lo = l2;
        hi = h2;
    }
    Ok((0.5 * (lo + hi), x))
}

/// Largest eigenvalue modulus of a square nonnegative matrix, as the maximum
/// over the irreducible diagonal blocks of its Frobenius normal form.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64, SpectralError> {
    let n = m.nrows();
    if m.ncols() != n || m.iter().any(|&x| !(x >= 0.0)) {
        return Err(SpectralError::NotNonnegative);
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|r| (0..n).filter(|&c| m[(r, c)] > 0.0).collect()).collect();
    let mut rho = 0.0f64;
    for comp in strongly_connected(&adj) {
        let block = DMatrix::from_fn(comp.len(), comp.len(), |a, b| m[(comp[a], comp[b])]);
        if comp.len() == 1 {
            rho = rho.max(block[(0, 0)]);
        } else {
            rho = rho.max(perron(&block)?.0);
        }
    }
    Ok(rho)
}

/// A spectral radius, with the exact integer value when one is certified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Radius {
    pub value: f64,
    pub exact: Option<u64>,
}

impl Radius {
    pub fn zero() -> Self {
        Radius { value: 0.0, exact: Some(0) }
    }

    /// Equality with exact comparison when both are integers, relative
    /// tolerance otherwise.
    pub fn equals(&self, o: &Radius) -> bool {
        match (self.exact, o.exact) {
            (Some(a), Some(b)) => a == b,
            _ => (self.value - o.value).abs() <= CRITICAL_TOL * self.value.abs().max(o.value.abs()),
        }
    }

    /// Equal within tolerance but not provably equal.
    pub fn near_tie(&self, o: &Radius) -> bool {
        self.equals(o) && !(self.exact.is_some() && o.exact.is_some()) && self.value != o.value
    }

    pub fn greater(&self, o: &Radius) -> bool {
        !self.equals(o) && self.value > o.value
    }
}

/// Spectral radius of an integer matrix; an integer value is certified by
/// an exact characteristic-polynomial evaluation.
pub fn integer_radius(m: &IntMatrix) -> Result<Radius, SpectralError> {
    let value = spectral_radius(&m.to_f64())?;
    let c = value.round();
    if (value - c).abs() <= 1e-9 * c.max(1.0) && c < 1e15 && m.char_poly_at(c as i128) == Some(0) {
        return Ok(Radius { value: c, exact: Some(c as u64) });
    }
    Ok(Radius { value, exact: None })
}

/// Whether every colour of the restriction is irreducible.
pub fn is_coordinatewise_irreducible(s: &Skeleton, comp: &[usize]) -> bool {
    coordinatewise_irreducible(s, comp)
}

/// Common ℓ¹-normalized Perron–Frobenius vector of commuting irreducible
/// matrices, taken from their sum and verified against each one.
pub fn common_pf_vector(mats: &[IntMatrix], radii: &[Radius]) -> Result<DVector<f64>, SpectralError> {
    if !mats.iter().all(crate::structure::is_irreducible) {
        return Err(SpectralError::Reducible);
    }
    let n = mats[0].dim();
    let sum = mats.iter().fold(DMatrix::<f64>::zeros(n, n), |acc, m| acc + m.to_f64());
    let (_, x) = perron(&sum)?;
    for (i, (m, r)) in mats.iter().zip(radii).enumerate() {
        let res = (m.to_f64() * &x - &x * r.value).abs().sum();
        if res > PF_RESIDUAL_TOL * r.value.max(1.0) {
            return Err(SpectralError::VerificationFailed { color: i, residual: res });
        }
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSpectrum {
    pub component: usize,
    pub vertices: Vec<usize>,
    pub trivial: bool,
    pub rho: Vec<Radius>,
    pub coordinatewise_irreducible: bool,
    /// Present for nontrivial coordinatewise irreducible components.
    pub pf_vector: Option<Vec<f64>>,
    /// Colour `i` entry: `ρ(A_{C,i}) = ρ(A_i)`.
    pub critical: Vec<bool>,
    /// Colours where the component is critical.
    pub k_c: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub rho: Vec<Radius>,
    pub components: Vec<ComponentSpectrum>,
    pub independence: IndependenceVerdict,
    pub warnings: Vec<String>,
}

impl SpectralSummary {
    pub fn new(s: &Skeleton, d: &Decomposition) -> Result<Self, SpectralError> {
        let k = s.k();
        let rho = s.matrices().iter().map(integer_radius).collect::<Result<Vec<_>, _>>()?;
        let mut warnings = Vec::new();
        let mut components = Vec::new();
        for (ci, comp) in d.components.iter().enumerate() {
            if comp.trivial {
                components.push(ComponentSpectrum {
                    component: ci,
                    vertices: comp.vertices.clone(),
                    trivial: true,
                    rho: vec![Radius::zero(); k],
                    coordinatewise_irreducible: false,
                    pf_vector: None,
                    critical: vec![false; k],
                    k_c: vec![],
                });
                continue;
            }
            let mats: Vec<IntMatrix> = s.matrices().iter().map(|m| m.restrict(&comp.vertices)).collect();
            let crho = mats.iter().map(integer_radius).collect::<Result<Vec<_>, _>>()?;
            let cwi = mats.iter().all(crate::structure::is_irreducible);
            let pf = if cwi { Some(common_pf_vector(&mats, &crho)?.iter().copied().collect()) } else { None };
            let critical: Vec<bool> = (0..k).map(|i| crho[i].equals(&rho[i])).collect();
            for i in 0..k {
                if crho[i].near_tie(&rho[i]) {
                    warnings.push(format!(
                        "colour {} radius of component at {} ties with the global radius only within tolerance ({} vs {})",
                        i + 1,
                        s.name(comp.vertices[0]),
                        crho[i].value,
                        rho[i].value
                    ));
                }
            }
            let k_c = (0..k).filter(|&i| critical[i]).collect();
            components.push(ComponentSpectrum {
                component: ci,
                vertices: comp.vertices.clone(),
                trivial: false,
                rho: crho,
                coordinatewise_irreducible: cwi,
                pf_vector: pf,
                critical,
                k_c,
            });
        }
        let independence = independence_of_radii(&rho);
        Ok(Self { rho, components, independence, warnings })
    }

    pub fn component(&self, c: usize) -> &ComponentSpectrum {
        &self.components[c]
    }

    /// For each colour, the components critical in it.
    pub fn critical_components(&self) -> Vec<Vec<usize>> {
        (0..self.rho.len()).map(|j| self.components.iter().filter(|c| c.critical[j]).map(|c| c.component).collect()).collect()
    }

    /// `max_C ρ(A_{C,i})` for each colour.
    pub fn component_max(&self) -> Vec<f64> {
        (0..self.rho.len()).map(|i| self.components.iter().map(|c| c.rho[i].value).fold(0.0, f64::max)).collect()
    }
}

/// Verdict on the rational independence of `{ln ρ_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IndependenceVerdict {
    Independent,
    /// An integer relation `Σ c_i ln ρ_i = 0`; for a pair also the common base.
    Dependent { relation: Vec<i64>, base: Option<u64>, exponents: Option<Vec<u32>> },
    /// Non-authoritative scan for irrational radii.
    Heuristic { likely_independent: bool, detail: String },
    Unknown { detail: String },
}

impl IndependenceVerdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, IndependenceVerdict::Independent)
    }

    /// Text for a "conditions" entry when a claim needs independence.
    pub fn condition(&self) -> Option<String> {
        match self {
            IndependenceVerdict::Independent => None,
            IndependenceVerdict::Dependent { .. } => Some("requires rational independence: fails (logarithms of radii are dependent)".into()),
            IndependenceVerdict::Heuristic { likely_independent, .. } => {
                Some(format!("requires rational independence: Heuristic ({})", if *likely_independent { "likely independent" } else { "likely dependent" }))
            }
            IndependenceVerdict::Unknown { .. } => Some("requires rational independence: Unknown".into()),
        }
    }
}

/// Independence verdict for `{ln ρ_i}` from exact radii when available.
pub fn independence_of_radii(rho: &[Radius]) -> IndependenceVerdict {
    if rho.iter().all(|r| r.exact.is_some()) {
        let vals: Vec<u64> = rho.iter().map(|r| r.exact.unwrap()).collect();
        if vals.contains(&0) {
            return IndependenceVerdict::Unknown { detail: "a radius is zero".into() };
        }
        rational_independence(&vals)
    } else {
        heuristic_independence(&rho.iter().map(|r| r.value).collect::<Vec<_>>())
    }
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Decides whether `{ln v : v ∈ values}` is linearly independent over ℚ.
///
/// The logarithms are dependent exactly when the prime-exponent vectors of
/// the values are linearly dependent; `ln 1 = 0` makes any family containing
/// `1` dependent. For two values this is the familiar criterion `m = k^c`,
/// `n = k^d` with `gcd(c, d) = 1`, and the base and exponents are returned.
pub fn rational_independence(values: &[u64]) -> IndependenceVerdict {
    assert!(values.iter().all(|&v| v > 0), "values must be positive");
    if let Some(i) = values.iter().position(|&v| v == 1) {
        let mut relation = vec![0; values.len()];
        relation[i] = 1;
        return IndependenceVerdict::Dependent { relation, base: None, exponents: None };
    }
    let facs: Vec<Vec<(u64, u32)>> = values.iter().map(|&v| factorize(v)).collect();
    let mut primes: Vec<u64> = facs.iter().flatten().map(|&(p, _)| p).collect();
    primes.sort_unstable();
    primes.dedup();
    // Columns are values, rows are primes.
    let cols: Vec<Vec<i128>> = facs
        .iter()
        .map(|f| primes.iter().map(|p| f.iter().find(|(q, _)| q == p).map_or(0, |&(_, e)| e as i128)).collect())
        .collect();
    match integer_kernel_vector(&cols) {
        None => IndependenceVerdict::Independent,
        Some(relation) => {
            let (base, exponents) = if values.len() == 2 {
                // Proportional exponent vectors: m = k0^gm, n = k0^gn with k0 primitive.
                let gm = cols[0].iter().fold(0u64, |acc, &e| gcd(acc, e as u64));
                let gn = cols[1].iter().fold(0u64, |acc, &e| gcd(acc, e as u64));
                let g = gcd(gm, gn);
                let k = primes.iter().zip(&cols[0]).fold(1u64, |acc, (&p, &e)| acc * p.pow((e as u64 / gm * g) as u32));
                (Some(k), Some(vec![(gm / g) as u32, (gn / g) as u32]))
            } else {
                (None, None)
            };
            IndependenceVerdict::Dependent { relation, base, exponents }
        }
    }
}

/// A nonzero integer vector `c` with `Σ c_j col_j = 0`, if the columns are
/// dependent. Exact fraction-free elimination.
fn integer_kernel_vector(cols: &[Vec<i128>]) -> Option<Vec<i64>> {
    let ncols = cols.len();
    let nrows = cols.first().map_or(0, |c| c.len());
    // Row-major augmented matrix: rows = primes, columns = values.
    let mut a: Vec<Vec<i128>> = (0..nrows).map(|r| (0..ncols).map(|c| cols[c][r]).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, p);
        for r in 0..nrows {
            if r != row && a[r][col] != 0 {
                let (x, y) = (a[row][col], a[r][col]);
                for c in 0..ncols {
                    a[r][c] = a[r][c] * x - a[row][c] * y;
                }
                let g = a[r].iter().fold(0u64, |g, &v| gcd(g, v.unsigned_abs() as u64)) as i128;
                if g > 1 {
                    for c in 0..ncols {
                        a[r][c] /= g;
                    }
                }
            }
        }
        pivot_cols.push((row, col));
        row += 1;
        if row == nrows {
            break;
        }
    }
    if pivot_cols.len() == ncols {
        return None;
    }
    let free = (0..ncols).find(|c| !pivot_cols.iter().any(|&(_, pc)| pc == *c)).unwrap();
    // Scale so every pivot equation has an integer solution.
    let l = pivot_cols.iter().fold(1i128, |l, &(r, c)| {
        let p = a[r][c].abs();
        l / gcd(l as u64, p as u64) as i128 * p
    });
    let mut v = vec![0i128; ncols];
    v[free] = l;
    for &(r, c) in &pivot_cols {
        v[c] = -a[r][free] * l / a[r][c];
    }
    let g = v.iter().fold(0u64, |g, &x| gcd(g, x.unsigned_abs() as u64)) as i128;
    Some(v.into_iter().map(|x| (x / g) as i64).collect())
}

/// Continued-fraction scan of `ln a / ln b` for each pair; a convergent with
/// small denominator matching to near machine precision suggests dependence.
pub fn heuristic_independence(values: &[f64]) -> IndependenceVerdict {
    if values.iter().any(|&v| !(v > 0.0)) {
        return IndependenceVerdict::Unknown { detail: "non-positive radius".into() };
    }
    if values.iter().any(|&v| (v - 1.0).abs() < 1e-12) {
        return IndependenceVerdict::Heuristic { likely_independent: false, detail: "a radius is 1 within tolerance".into() };
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let x = values[i].ln() / values[j].ln();
            if let Some((p, q)) = small_convergent(x, 40) {
                return IndependenceVerdict::Heuristic {
                    likely_independent: false,
                    detail: format!("ln ratio of colours {} and {} is close to {p}/{q}", i + 1, j + 1),
                };
            }
        }
    }
    IndependenceVerdict::Heuristic { likely_independent: true, detail: "no small-denominator convergent to depth 40".into() }
}

fn small_convergent(x: f64, depth: usize) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut t = x;
    for _ in 0..depth {
        let a = t.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let ai = a as i128;
        (h0, h1) = (h1, ai * h1 + h0);
        (k0, k1) = (k1, ai * k1 + k0);
        if k1 > 1_000 {
            return None;
        }
        if (x - h1 as f64 / k1 as f64).abs() <= 1e-12 * x.abs().max(1.0) {
            return Some((h1 as i64, k1 as i64));
        }
        let frac = t - a;
        if frac.abs() < 1e-15 {
            return None;
        }
        t = 1.0 / frac;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn dm(rows: &[&[f64]]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), rows.len(), |r, c| rows[r][c])
    }

    #[test]
    fn small_radii() {
        assert_eq!(spectral_radius(&dm(&[&[2.0]])).unwrap(), 2.0);
        assert_eq!(spectral_radius(&dm(&[&[1.0, 1.0], &[0.0, 1.0]])).unwrap(), 1.0);
        let r = spectral_radius(&dm(&[&[0.0, 2.0], &[3.0, 0.0]])).unwrap();
        assert!((r - 6f64.sqrt()).abs() <= 1e-12 * r);
        assert_eq!(spectral_radius(&DMatrix::zeros(3, 3)).unwrap(), 0.0);
        assert!(spectral_radius(&dm(&[&[-1.0]])).is_err());
    }

    #[test]
    fn periodic_matrix_converges() {
        // 3-cycle with weights: radius is the cube root of the product.
        let m = dm(&[&[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0], &[5.0, 0.0, 0.0]]);
        let r = spectral_radius(&m).unwrap();
        assert!((r - 30f64.cbrt()).abs() <= 1e-12 * r);
    }

    #[test]
    fn integer_radius_is_certified() {
        let s = fixtures::figure1();
        assert_eq!(integer_radius(s.matrix(0)).unwrap().exact, Some(8));
        assert_eq!(integer_radius(s.matrix(1)).unwrap().exact, Some(12));
        let m = IntMatrix::from_rows(&[vec![0, 2], vec![3, 0]]);
        assert_eq!(integer_radius(&m).unwrap().exact, None);
    }

    #[test]
    fn coordinatewise_irreducibility_examples() {
        let s = fixtures::dumbbell();
        assert!(!is_coordinatewise_irreducible(&s, &[0]));
        // p = q example with a diagonal second matrix
        let t = Skeleton::from_matrices(&["u", "v"], &[vec![vec![1, 2], vec![2, 1]], vec![vec![3, 0], vec![0, 3]]]).unwrap();
        assert!(!is_coordinatewise_irreducible(&t, &[0, 1]));
        let pos = Skeleton::from_matrices(&["u", "v"], &[vec![vec![1, 2], vec![2, 1]], vec![vec![1, 1], vec![1, 1]]]).unwrap();
        assert!(is_coordinatewise_irreducible(&pos, &[0, 1]));
    }

    #[test]
    fn pf_vectors() {
        let one = [IntMatrix::from_rows(&[vec![2]]), IntMatrix::from_rows(&[vec![3]])];
        let r: Vec<Radius> = one.iter().map(|m| integer_radius(m).unwrap()).collect();
        assert_eq!(common_pf_vector(&one, &r).unwrap().as_slice(), &[1.0]);
        let circ = [IntMatrix::from_rows(&[vec![0, 2], vec![2, 0]]), IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]])];
        let r: Vec<Radius> = circ.iter().map(|m| integer_radius(m).unwrap()).collect();
        let x = common_pf_vector(&circ, &r).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-14 && (x[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn figure_one_summary() {
        let s = fixtures::figure1();
        let d = Decomposition::new(&s);
        let sum = SpectralSummary::new(&s, &d).unwrap();
        assert_eq!(sum.rho.iter().map(|r| r.exact).collect::<Vec<_>>(), vec![Some(8), Some(12)]);
        let u = &sum.components[d.comp_of[0]];
        let x = &sum.components[d.comp_of[3]];
        assert_eq!(u.rho.iter().map(|r| r.exact).collect::<Vec<_>>(), vec![Some(2), Some(6)]);
        assert_eq!(x.pf_vector.as_deref(), Some(&[1.0][..]));
        assert_eq!(x.critical, vec![true, true]);
        assert_eq!(u.critical, vec![false, false]);
        assert!(sum.independence.is_independent());
        assert_eq!(sum.component_max(), vec![8.0, 12.0]);
    }

    #[test]
    fn figure_three_is_critical_everywhere() {
        let s = fixtures::figure3();
        let d = Decomposition::new(&s);
        let sum = SpectralSummary::new(&s, &d).unwrap();
        assert_eq!(sum.components[d.comp_of[0]].k_c, vec![0, 1]);
        assert_eq!(sum.critical_components(), vec![vec![d.comp_of[0]], vec![d.comp_of[0]]]);
    }

    #[test]
    fn single_component_critical_for_all() {
        let s = fixtures::single_vertex();
        let d = Decomposition::new(&s);
        let sum = SpectralSummary::new(&s, &d).unwrap();
        assert_eq!(sum.components[0].k_c, vec![0, 1]);
    }

    #[test]
    fn independence_examples() {
        assert_eq!(rational_independence(&[8, 12]), IndependenceVerdict::Independent);
        match rational_independence(&[4, 8]) {
            IndependenceVerdict::Dependent { base, exponents, relation } => {
                assert_eq!(base, Some(2));
                assert_eq!(exponents, Some(vec![2, 3]));
                assert_eq!(relation.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![3, 2]);
            }
            v => panic!("{v:?}"),
        }
        match rational_independence(&[7, 7]) {
            IndependenceVerdict::Dependent { base, exponents, .. } => {
                assert_eq!(base, Some(7));
                assert_eq!(exponents, Some(vec![1, 1]));
            }
            v => panic!("{v:?}"),
        }
        assert!(!rational_independence(&[2, 3, 6]).is_independent());
        assert!(rational_independence(&[2, 3, 5]).is_independent());
        assert!(!rational_independence(&[1, 5]).is_independent());
        assert!(rational_independence(&[5]).is_independent());
    }

    #[test]
    fn heuristic_for_irrational_radii() {
        // sqrt 6 and 6: ln ratio exactly 1/2
        assert!(matches!(heuristic_independence(&[6f64.sqrt(), 6.0]), IndependenceVerdict::Heuristic { likely_independent: false, .. }));
        assert!(matches!(heuristic_independence(&[6f64.sqrt(), 5.0]), IndependenceVerdict::Heuristic { likely_independent: true, .. }));
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(997), vec![(997, 1)]);
        assert_eq!(factorize(1), vec![]);
    }

    proptest! {
        #[test]
        fn radius_brackets_and_matches_eigen(entries in proptest::collection::vec(0u32..5, 16), n in 1usize..=4) {
            let m = DMatrix::from_fn(n, n, |r, c| entries[r * 4 + c] as f64);
            let rho = spectral_radius(&m).unwrap();
            // General eigensolvers lose half the digits on defective eigenvalues.
            let ev = m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!((rho - ev).abs() <= 1e-6 * ev.max(1.0));
            // ρ itself is an eigenvalue to full precision.
            let shifted = DMatrix::<f64>::identity(n, n) * rho - &m;
            let smin = shifted.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
            prop_assert!(smin <= 1e-9 * rho.max(1.0), "smallest singular value {}", smin);
        }

        #[test]
        fn block_triangular_radius_is_block_max(a in 1u32..6, b in 0u32..6, c in 1u32..6, p in 0u32..4) {
            let m = DMatrix::from_row_slice(2, 2, &[a as f64, p as f64, 0.0, c as f64]);
            let _ = b;
            prop_assert_eq!(spectral_radius(&m).unwrap(), a.max(c) as f64);
        }

        #[test]
        fn pair_verdict_matches_exponent_proportionality(m in 2u64..200, n in 2u64..200) {
            let v = rational_independence(&[m, n]);
            if let IndependenceVerdict::Dependent { base: Some(k), exponents: Some(e), .. } = &v {
                prop_assert_eq!(k.pow(e[0]), m);
                prop_assert_eq!(k.pow(e[1]), n);
                prop_assert_eq!(gcd(e[0] as u64, e[1] as u64), 1);
            }
        }
    }
}
