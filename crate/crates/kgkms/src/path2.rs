//! Concrete 2-graphs given by coloured edges and factorization squares:
//! normal forms of paths, minimal common extensions, exhaustive sets,
//! gap-projection values and a spot check of the KMS condition.
//!
//! A square `θ(e, f) = (f′, e′)` says the blue-red path `ef` equals the
//! red-blue path `f′e′`. Normal forms list all blue edges before all red ones.

use crate::kms::{neumann_series, KmsError, KmsStateVector};
use crate::matrix::apply_resolvent_product;
use crate::skeleton::{Degree, Skeleton, SkeletonError, SkeletonInput};
use crate::spectral::spectral_radius;
use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use thiserror::Error;

/// Largest total degree `enumerate_paths` accepts by default.
pub const DEFAULT_PATH_BOUND: u32 = 8;
/// Target for the certified tail of truncated path sums.
pub const SERIES_TAIL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn index(self) -> usize {
        match self {
            Color::Blue => 0,
            Color::Red => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeInput {
    pub id: String,
    pub color: Color,
    pub range: String,
    pub source: String,
}

/// `θ(blue_in, red_in) = (red_out, blue_out)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareInput {
    pub blue_in: String,
    pub red_in: String,
    pub red_out: String,
    pub blue_out: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SquareError {
    #[error("concrete graphs must have rank 2, found {0}")]
    RankNotTwo(usize),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("edge {edge} refers to unknown vertex {vertex}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("square refers to unknown edge {0}")]
    UnknownEdge(String),
    #[error("square {index}: {detail}")]
    EndpointMismatch { index: usize, detail: String },
    #[error("squares are not a bijection: {0}")]
    NotBijective(String),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("edges {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("a word needs at least one edge")]
    EmptyWord,
    #[error("total degree {requested} exceeds the bound {bound}")]
    BoundExceeded { requested: u32, bound: u32 },
    #[error("edge {edge} is not in {vertex}Λ¹")]
    NotAtVertex { edge: usize, vertex: usize },
    #[error("gap projection needs a nonempty edge set")]
    EmptyEdgeSet,
    #[error("vertex vector has negative entries")]
    NegativeVector,
    #[error(transparent)]
    Kms(#[from] KmsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub color: Color,
    pub range: usize,
    pub source: usize,
}

/// A path in blue-major normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathNF {
    pub degree: Vec<u32>,
    /// Blue edges first, then red.
    pub edges: Vec<usize>,
    pub range: usize,
    pub source: usize,
}

impl PathNF {
    pub fn vertex(v: usize) -> Self {
        Self { degree: vec![0, 0], edges: Vec::new(), range: v, source: v }
    }

    pub fn degree(&self) -> Degree {
        Degree(self.degree.clone())
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn render(&self, g: &ConcreteTwoGraph) -> String {
        if self.edges.is_empty() {
            return g.skeleton().name(self.range).to_string();
        }
        self.edges.iter().map(|&e| g.edge(e).id.as_str()).collect::<Vec<_>>().join("·")
    }
}

#[derive(Debug, Clone)]
pub struct ConcreteTwoGraph {
    skeleton: Skeleton,
    edges: Vec<Edge>,
    /// Edges by range vertex and colour.
    at: Vec<[Vec<usize>; 2]>,
    theta: HashMap<(usize, usize), (usize, usize)>,
    theta_inv: HashMap<(usize, usize), (usize, usize)>,
}

impl ConcreteTwoGraph {
    pub fn new(k: usize, vertices: &[String], edges: &[EdgeInput], squares: &[SquareInput]) -> Result<Self, SquareError> {
        if k != 2 {
            return Err(SquareError::RankNotTwo(k));
        }
        let vidx: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut ids = HashMap::new();
        let mut es = Vec::with_capacity(edges.len());
        for e in edges {
            let look = |name: &str| {
                vidx.get(name).copied().ok_or_else(|| SquareError::UnknownVertex { edge: e.id.clone(), vertex: name.to_string() })
            };
            let (range, source) = (look(&e.range)?, look(&e.source)?);
            if ids.insert(e.id.clone(), es.len()).is_some() {
                return Err(SquareError::DuplicateEdge(e.id.clone()));
            }
            es.push(Edge { id: e.id.clone(), color: e.color, range, source });
        }
        let n = vertices.len();
        let mut at = vec![[Vec::new(), Vec::new()]; n];
        let mut counts = vec![vec![vec![0i64; n]; n]; 2];
        for (i, e) in es.iter().enumerate() {
            at[e.range][e.color.index()].push(i);
            counts[e.color.index()][e.range][e.source] += 1;
        }

        let find = |id: &str| ids.get(id).copied().ok_or_else(|| SquareError::UnknownEdge(id.to_string()));
        let mut theta = HashMap::new();
        let mut theta_inv = HashMap::new();
        for (index, sq) in squares.iter().enumerate() {
            let (b, r, r2, b2) = (find(&sq.blue_in)?, find(&sq.red_in)?, find(&sq.red_out)?, find(&sq.blue_out)?);
            let mismatch = |detail: &str| SquareError::EndpointMismatch { index, detail: detail.to_string() };
            if es[b].color != Color::Blue || es[b2].color != Color::Blue || es[r].color != Color::Red || es[r2].color != Color::Red {
                return Err(mismatch("edge colours do not match their roles"));
            }
            if es[b].source != es[r].range {
                return Err(mismatch("blue_in and red_in are not composable"));
            }
            if es[r2].source != es[b2].range {
                return Err(mismatch("red_out and blue_out are not composable"));
            }
            if es[b].range != es[r2].range || es[r].source != es[b2].source {
                return Err(mismatch("the two sides have different range or source"));
            }
            if theta.insert((b, r), (r2, b2)).is_some() {
                return Err(SquareError::NotBijective(format!("pair ({}, {}) appears twice", sq.blue_in, sq.red_in)));
            }
            if theta_inv.insert((r2, b2), (b, r)).is_some() {
                return Err(SquareError::NotBijective(format!("pair ({}, {}) appears twice", sq.red_out, sq.blue_out)));
            }
        }
        for (b, e) in es.iter().enumerate().filter(|(_, e)| e.color == Color::Blue) {
            for &r in &at[e.source][1] {
                if !theta.contains_key(&(b, r)) {
                    return Err(SquareError::NotBijective(format!("no square for blue-red pair ({}, {})", e.id, es[r].id)));
                }
            }
        }
        for (r, e) in es.iter().enumerate().filter(|(_, e)| e.color == Color::Red) {
            for &b in &at[e.source][0] {
                if !theta_inv.contains_key(&(r, b)) {
                    return Err(SquareError::NotBijective(format!("no square for red-blue pair ({}, {})", e.id, es[b].id)));
                }
            }
        }
        let skeleton = Skeleton::validate(&SkeletonInput { k, vertices: vertices.to_vec(), matrices: counts })?;
        Ok(Self { skeleton, edges: es, at, theta, theta_inv })
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Edges of one colour with range `v`.
    pub fn edges_at(&self, v: usize, color: Color) -> &[usize] {
        &self.at[v][color.index()]
    }

    /// `vΛ¹`: all edges with range `v`.
    pub fn all_edges_at(&self, v: usize) -> Vec<usize> {
        self.at[v].concat()
    }

    /// `θ(blue, red) = (red′, blue′)`.
    pub fn theta(&self, blue: usize, red: usize) -> (usize, usize) {
        self.theta[&(blue, red)]
    }

    /// `θ⁻¹(red, blue) = (blue′, red′)`.
    pub fn theta_inv(&self, red: usize, blue: usize) -> (usize, usize) {
        self.theta_inv[&(red, blue)]
    }

    /// No edges of either colour have range `v`.
    pub fn is_absolute_source(&self, v: usize) -> bool {
        self.at[v].iter().all(Vec::is_empty)
    }

    fn check_composable(&self, word: &[usize]) -> Result<(), PathError> {
        for w in word.windows(2) {
            if self.edges[w[0]].source != self.edges[w[1]].range {
                return Err(PathError::NotComposable(w[0], w[1]));
            }
        }
        Ok(())
    }

    fn from_sorted(&self, word: Vec<usize>, vertex: usize) -> PathNF {
        if word.is_empty() {
            return PathNF::vertex(vertex);
        }
        let blue = word.iter().filter(|&&e| self.edges[e].color == Color::Blue).count() as u32;
        PathNF {
            degree: vec![blue, word.len() as u32 - blue],
            range: self.edges[word[0]].range,
            source: self.edges[*word.last().unwrap()].source,
            edges: word,
        }
    }

    /// Normal form of a composable word, rewriting the leftmost red-blue
    /// factor first.
    pub fn normal_form(&self, word: &[usize]) -> Result<PathNF, PathError> {
        self.normal_form_by(word, |_| 0)
    }

    /// Normal form where `pick(c)` chooses which of the `c` available
    /// red-blue factors to rewrite next.
    pub fn normal_form_by(&self, word: &[usize], mut pick: impl FnMut(usize) -> usize) -> Result<PathNF, PathError> {
        if word.is_empty() {
            return Err(PathError::EmptyWord);
        }
        self.check_composable(word)?;
        let mut w = word.to_vec();
        loop {
            let spots: Vec<usize> = (0..w.len().saturating_sub(1))
                .filter(|&i| self.edges[w[i]].color == Color::Red && self.edges[w[i + 1]].color == Color::Blue)
                .collect();
            if spots.is_empty() {
                break;
            }
            let i = spots[pick(spots.len()) % spots.len()];
            let (b, r) = self.theta_inv(w[i], w[i + 1]);
            w[i] = b;
            w[i + 1] = r;
        }
        Ok(self.from_sorted(w, 0))
    }

    /// The path `μν`; panics unless `s(μ) = r(ν)`.
    pub fn concat(&self, mu: &PathNF, nu: &PathNF) -> PathNF {
        assert_eq!(mu.source, nu.range, "paths are not composable");
        if mu.is_vertex() {
            return nu.clone();
        }
        if nu.is_vertex() {
            return mu.clone();
        }
        let word: Vec<usize> = mu.edges.iter().chain(&nu.edges).copied().collect();
        self.normal_form(&word).expect("composable by construction")
    }

    /// Splits `λ` as `λ(0, p) λ(p, d(λ))`; `p ≤ d(λ)` is required.
    pub fn factor(&self, lambda: &PathNF, p: &[u32]) -> (PathNF, PathNF) {
        let (n1, n2) = (lambda.degree[0] as usize, lambda.degree[1] as usize);
        let (p1, p2) = (p[0] as usize, p[1] as usize);
        assert!(p1 <= n1 && p2 <= n2, "segment degree exceeds path degree");
        let mut w = lambda.edges.clone();
        // Move the first p2 red edges left past the trailing blue edges.
        for j in 0..p2 {
            let mut pos = n1 + j;
            while pos > p1 + j {
                let (r, b) = self.theta(w[pos - 1], w[pos]);
                w[pos - 1] = r;
                w[pos] = b;
                pos -= 1;
            }
        }
        let cut = p1 + p2;
        let mid = if cut == 0 {
            lambda.range
        } else if cut == w.len() {
            lambda.source
        } else {
            self.edges[w[cut]].range
        };
        let rest = w.split_off(cut);
        (self.from_sorted(w, lambda.range).with_vertex(mid), self.from_sorted(rest, mid).with_vertex(mid))
    }

    /// All paths with range `v` and degree `n`.
    pub fn enumerate_paths(&self, v: usize, n: &[u32], bound: u32) -> Result<Vec<PathNF>, PathError> {
        let total: u32 = n.iter().sum();
        if total > bound {
            return Err(PathError::BoundExceeded { requested: total, bound });
        }
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.extend(v, n[0] as usize, n[1] as usize, &mut word, &mut out);
        Ok(out.into_iter().map(|w| self.from_sorted(w, v)).collect())
    }

    fn extend(&self, at: usize, blue: usize, red: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let (color, b, r) = match (blue, red) {
            (0, 0) => {
                out.push(word.clone());
                return;
            }
            (0, _) => (Color::Red, 0, red - 1),
            _ => (Color::Blue, blue - 1, red),
        };
        for &e in self.edges_at(at, color) {
            word.push(e);
            self.extend(self.edges[e].source, b, r, word, out);
            word.pop();
        }
    }

    /// All paths with range `v` and total degree at most `max_total`.
    pub fn paths_up_to(&self, v: usize, max_total: u32) -> Vec<PathNF> {
        let mut out = Vec::new();
        for t in 0..=max_total {
            for a in 0..=t {
                out.extend(self.enumerate_paths(v, &[a, t - a], max_total).expect("within bound"));
            }
        }
        out
    }

    /// Pairs `(η, ζ)` with `μη = νζ` of degree `d(μ) ∨ d(ν)`.
    pub fn lambda_min(&self, mu: &PathNF, nu: &PathNF) -> Vec<(PathNF, PathNF)> {
        if mu.range != nu.range {
            return Vec::new();
        }
        let join: Vec<u32> = mu.degree.iter().zip(&nu.degree).map(|(a, b)| *a.max(b)).collect();
        let ext: Vec<u32> = join.iter().zip(&mu.degree).map(|(j, m)| j - m).collect();
        let mut out = Vec::new();
        for eta in self.enumerate_paths(mu.source, &ext, u32::MAX).expect("unbounded") {
            let full = self.concat(mu, &eta);
            let (head, zeta) = self.factor(&full, &nu.degree);
            if head == *nu {
                out.push((eta, zeta));
            }
        }
        out
    }

    /// Decides whether `E ⊆ vΛ¹` is exhaustive at `v`: every path of nonzero
    /// degree with range `v` has a common extension with some edge of `E`.
    ///
    /// Mixed paths are decided by their initial degree-(1,1) segment. For
    /// single-colour paths the sets of initial other-colour edges reachable
    /// by one-edge extensions are computed as a fixed point over vertices.
    pub fn is_exhaustive(&self, v: usize, e: &[usize]) -> bool {
        let set: HashSet<usize> = e.iter().copied().collect();
        for &b in self.edges_at(v, Color::Blue) {
            for &r in self.edges_at(self.edges[b].source, Color::Red) {
                if !set.contains(&b) && !set.contains(&self.theta(b, r).0) {
                    return false;
                }
            }
        }
        for color in [Color::Blue, Color::Red] {
            let reach = self.initial_sets(color);
            for &first in self.edges_at(v, color) {
                if set.contains(&first) {
                    continue;
                }
                for tail in &reach[self.edges[first].source] {
                    if !tail.iter().any(|&o| set.contains(&self.bring_forward(first, o))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// For an edge `first` followed by an edge `other` of the other colour,
    /// the other-colour edge that starts the rewritten path.
    fn bring_forward(&self, first: usize, other: usize) -> usize {
        match self.edges[first].color {
            Color::Blue => self.theta(first, other).0,
            Color::Red => self.theta_inv(first, other).0,
        }
    }

    /// For each vertex `w`, the achievable sets `{initial other-colour edge of
    /// λg}` over single-colour paths `λ` of colour `color` with range `w`
    /// (including `w` itself), as `g` runs over other-colour edges at `s(λ)`.
    fn initial_sets(&self, color: Color) -> Vec<BTreeSet<BTreeSet<usize>>> {
        let other = match color {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        };
        let n = self.skeleton.n();
        let mut sets: Vec<BTreeSet<BTreeSet<usize>>> =
            (0..n).map(|w| BTreeSet::from([self.edges_at(w, other).iter().copied().collect()])).collect();
        loop {
            let mut changed = false;
            for (e, edge) in self.edges.iter().enumerate().filter(|(_, x)| x.color == color) {
                let images: Vec<BTreeSet<usize>> =
                    sets[edge.source].iter().map(|t| t.iter().map(|&o| self.bring_forward(e, o)).collect()).collect();
                for img in images {
                    changed |= sets[edge.range].insert(img);
                }
            }
            if !changed {
                return sets;
            }
        }
    }

    /// Exhaustiveness checked by enumerating every path up to total degree
    /// `bound`.
    pub fn is_exhaustive_bounded(&self, v: usize, e: &[usize], bound: u32) -> bool {
        let edges: Vec<PathNF> = e.iter().map(|&x| self.from_sorted(vec![x], v)).collect();
        self.paths_up_to(v, bound)
            .iter()
            .filter(|l| !l.is_vertex())
            .all(|l| edges.iter().any(|x| !self.lambda_min(l, x).is_empty()))
    }
}

impl PathNF {
    fn with_vertex(mut self, v: usize) -> Self {
        if self.edges.is_empty() {
            self.range = v;
            self.source = v;
        }
        self
    }
}

/// A vertex and an edge set `E ⊆ vΛ¹` whose gap projection
/// `∏_{e∈E}(q_v − t_e t_e*)` is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProjectionSpec {
    pub vertex: usize,
    pub edges: Vec<usize>,
}

impl GapProjectionSpec {
    pub fn new(g: &ConcreteTwoGraph, vertex: usize, edges: Vec<usize>) -> Result<Self, PathError> {
        if edges.is_empty() {
            return Err(PathError::EmptyEdgeSet);
        }
        if let Some(&e) = edges.iter().find(|&&e| g.edge(e).range != vertex) {
            return Err(PathError::NotAtVertex { edge: e, vertex });
        }
        Ok(Self { vertex, edges })
    }

    /// The full set `vΛ^{e_i}`.
    pub fn full_color(g: &ConcreteTwoGraph, vertex: usize, color: Color) -> Result<Self, PathError> {
        Self::new(g, vertex, g.edges_at(vertex, color).to_vec())
    }

    pub fn edges_of(&self, g: &ConcreteTwoGraph, color: Color) -> Vec<usize> {
        self.edges.iter().copied().filter(|&e| g.edge(e).color == color).collect()
    }

    /// Colours present in `E`.
    pub fn colors(&self, g: &ConcreteTwoGraph) -> Vec<Color> {
        [Color::Blue, Color::Red].into_iter().filter(|&c| !self.edges_of(g, c).is_empty()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapProjectionValue {
    /// Expansion over subsets of `E`, with path sums truncated.
    pub inclusion_exclusion: f64,
    /// Sum over the path representation grouped by initial segments.
    pub direct: f64,
    pub difference: f64,
    /// Certified bound on the truncation error of the expansion.
    pub tail_bound: f64,
}

fn supercritical(s: &Skeleton, q: &[f64]) -> Result<(), PathError> {
    for (i, (a, &qi)) in s.matrices_f64().iter().zip(q).enumerate() {
        let rho = spectral_radius(a).map_err(KmsError::from)?;
        if qi * rho >= 1.0 - 1e-12 {
            return Err(KmsError::Subcritical { color: i, lhs: -qi.ln(), rhs: rho.ln() }.into());
        }
    }
    Ok(())
}

/// `φ_ε(∏_{e∈E}(q_v − t_e t_e*))` for the state with boundary vector `ε`,
/// evaluated two independent ways.
pub fn gap_projection_value(
    g: &ConcreteTwoGraph,
    eps: &DVector<f64>,
    beta: f64,
    r: &[f64],
    spec: &GapProjectionSpec,
) -> Result<GapProjectionValue, PathError> {
    if eps.iter().any(|&x| x < 0.0) {
        return Err(PathError::NegativeVector);
    }
    let s = g.skeleton();
    let q: Vec<f64> = r.iter().map(|ri| (-beta * ri).exp()).collect();
    supercritical(s, &q)?;
    let mats = s.matrices_f64();
    let v = spec.vertex;
    let in_e: HashSet<usize> = spec.edges.iter().copied().collect();
    let mixed = g.enumerate_paths(v, &[1, 1], 2)?;
    let initial_red = |l: &PathNF| g.factor(l, &[0, 1]).0.edges[0];

    // Inclusion-exclusion with a truncated path sum for m.
    let series = neumann_series(&mats, &q, eps, SERIES_TAIL)?;
    let m = &series.y;
    let mut ie = m[v];
    let mut weight = 1.0;
    for &e in &spec.edges {
        let c = g.edge(e).color.index();
        ie -= q[c] * m[g.edge(e).source];
        weight += q[c];
    }
    for l in &mixed {
        if in_e.contains(&l.edges[0]) && in_e.contains(&initial_red(l)) {
            ie += q[0] * q[1] * m[l.source];
            weight += q[0] * q[1];
        }
    }

    // Grouped path representation with exact resolvents.
    let full = apply_resolvent_product(&mats, &q, eps).ok_or(KmsError::Singular)?;
    let single: Vec<DVector<f64>> = (0..2)
        .map(|i| apply_resolvent_product(&mats[i..=i], &q[i..=i], eps).ok_or(KmsError::Singular))
        .collect::<Result<_, _>>()?;
    let mut direct = eps[v];
    for color in [Color::Blue, Color::Red] {
        let c = color.index();
        for &e in g.edges_at(v, color) {
            if !in_e.contains(&e) {
                direct += q[c] * single[c][g.edge(e).source];
            }
        }
    }
    for l in &mixed {
        if !in_e.contains(&l.edges[0]) && !in_e.contains(&initial_red(l)) {
            direct += q[0] * q[1] * full[l.source];
        }
    }
    Ok(GapProjectionValue { inclusion_exclusion: ie, direct, difference: (ie - direct).abs(), tail_bound: series.tail_bound * weight })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpotCheckReport {
    pub samples: usize,
    /// Largest `|φ(ab) − e^{−βr·(d(μ)−d(ν))} φ(ba)|` over the sampled pairs.
    pub max_violation: f64,
    /// The pair attaining it, rendered as `(μ, ν, σ, τ)`.
    pub worst: Option<[String; 4]>,
    /// Pairs whose product is nonzero on at least one side.
    pub nontrivial: usize,
    /// Largest negative part of `φ(q_v − Σ_{λ∈vΛ^n} t_λ t_λ*)` over vertices
    /// and `n ∈ {e₁, e₂, e₁+e₂}`, and of the corresponding product relation.
    pub positivity_violation: f64,
}

impl SpotCheckReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation <= tol && self.positivity_violation <= tol
    }
}

fn state_on(st: &KmsStateVector, alpha: &PathNF, gamma: &PathNF) -> f64 {
    if alpha == gamma {
        st.diagonal_value(&alpha.degree(), alpha.source)
    } else {
        0.0
    }
}

/// `φ((t_μ t_ν*)(t_σ t_τ*))`, expanding `t_ν* t_σ` over `Λ^min(ν, σ)`.
fn product_value(g: &ConcreteTwoGraph, st: &KmsStateVector, mu: &PathNF, nu: &PathNF, sigma: &PathNF, tau: &PathNF) -> f64 {
    g.lambda_min(nu, sigma)
        .iter()
        .map(|(eta, zeta)| state_on(st, &g.concat(mu, eta), &g.concat(tau, zeta)))
        .sum()
}

/// Samples spanning pairs `a = t_μ t_ν*`, `b = t_σ t_τ*` and compares
/// `φ(ab)` with `e^{−βr·(d(μ)−d(ν))} φ(ba)`, and checks the positivity
/// relations on vertex projections.
pub fn kms_spot_check(g: &ConcreteTwoGraph, st: &KmsStateVector, samples: usize, seed: u64, max_len: u32) -> SpotCheckReport {
    let n = g.skeleton().n();
    let paths: Vec<PathNF> = (0..n).flat_map(|v| g.paths_up_to(v, max_len)).collect();
    let mut by_source: HashMap<usize, Vec<&PathNF>> = HashMap::new();
    let mut by_range: HashMap<usize, Vec<&PathNF>> = HashMap::new();
    for p in &paths {
        by_source.entry(p.source).or_default().push(p);
        by_range.entry(p.range).or_default().push(p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_violation = 0.0f64;
    let mut worst = None;
    let mut nontrivial = 0;
    for _ in 0..samples {
        let mu = paths.choose(&mut rng).expect("graph has vertices");
        let nu = *by_source[&mu.source].choose(&mut rng).unwrap();
        let (sigma, tau) = if rng.gen_bool(0.4) {
            // aligned pair: σ = νη and τ = μη make both products diagonal
            let eta = *by_range[&nu.source].choose(&mut rng).unwrap();
            (g.concat(nu, eta), g.concat(mu, eta))
        } else {
            let sigma = if rng.gen_bool(0.9) { *by_range[&nu.range].choose(&mut rng).unwrap() } else { paths.choose(&mut rng).unwrap() };
            (sigma.clone(), (*by_source[&sigma.source].choose(&mut rng).unwrap()).clone())
        };
        let (sigma, tau) = (&sigma, &tau);
        let ab = product_value(g, st, mu, nu, sigma, tau);
        let ba = product_value(g, st, sigma, tau, mu, nu);
        let shift = mu.degree().dot(&st.r) - nu.degree().dot(&st.r);
        let rhs = (-st.beta * shift).exp() * ba;
        if ab != 0.0 || ba != 0.0 {
            nontrivial += 1;
        }
        let viol = (ab - rhs).abs();
        if viol > max_violation || worst.is_none() {
            max_violation = max_violation.max(viol);
            worst = Some([mu.render(g), nu.render(g), sigma.render(g), tau.render(g)]);
        }
    }
    SpotCheckReport { samples, max_violation, worst, nontrivial, positivity_violation: positivity_violation(g, st) }
}

fn positivity_violation(g: &ConcreteTwoGraph, st: &KmsStateVector) -> f64 {
    let mut worst = 0.0f64;
    for v in 0..g.skeleton().n() {
        let mut sums = [0.0; 3];
        for (slot, deg) in [[1, 0], [0, 1], [1, 1]].iter().enumerate() {
            for l in g.enumerate_paths(v, deg, 2).expect("within bound") {
                sums[slot] += st.diagonal_value(&l.degree(), l.source);
            }
            worst = worst.max(sums[slot] - st.m[v]);
        }
        worst = worst.max(sums[0] + sums[1] - sums[2] - st.m[v]);
    }
    worst
}
