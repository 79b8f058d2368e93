//! Finite k-graph skeletons: k commuting vertex matrices over a named vertex
//! set. Entry `(v, w)` of matrix `i` counts edges of colour `i` with range `v`
//! and source `w`.

use crate::matrix::{IntMatrix, Overflow};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

/// Attached to every report built from matrices alone.
pub const SKELETON_DISCLAIMER: &str =
    "skeleton-level only: commuting vertex matrices are necessary but not sufficient for a k-graph to exist";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

/// A multidegree in `ℕ^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree(pub Vec<u32>);

impl Degree {
    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    pub fn unit(k: usize, i: usize) -> Self {
        let mut d = vec![0; k];
        d[i] = 1;
        Degree(d)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        Degree(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// `self − o`, or `None` if some coordinate would go negative.
    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        self.0.iter().zip(&o.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Degree)
    }

    pub fn join(&self, o: &Self) -> Self {
        Degree(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn le(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `r·d` for a rate vector `r`.
    pub fn dot(&self, r: &[f64]) -> f64 {
        self.0.iter().zip(r).map(|(&a, b)| a as f64 * b).sum()
    }
}

/// Raw input document, before any checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonInput {
    pub k: usize,
    pub vertices: Vec<String>,
    pub matrices: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorWitness {
    pub i: usize,
    pub j: usize,
    pub row: usize,
    pub col: usize,
    /// `(A_i A_j)(row, col)`
    pub lhs: u64,
    /// `(A_j A_i)(row, col)`
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error("rank mismatch: k = {k} but {found} matrices supplied")]
    RankMismatch { k: usize, found: usize },
    #[error("matrix {matrix} is not {n}x{n}")]
    NonSquare { matrix: usize, n: usize },
    #[error("matrix {matrix} has negative entry {value} at ({row}, {col})")]
    NegativeEntry { matrix: usize, row: usize, col: usize, value: i64 },
    #[error("duplicate or empty vertex name {0:?}")]
    BadVertexName(String),
    #[error("vertex matrices do not commute: {}", describe_witnesses(.0))]
    NonCommuting(Vec<CommutatorWitness>),
    #[error("path count overflow")]
    Overflow,
}

fn describe_witnesses(w: &[CommutatorWitness]) -> String {
    w.iter()
        .map(|c| format!("(A{}A{})({},{})={} vs {}", c.i + 1, c.j + 1, c.row, c.col, c.lhs, c.rhs))
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<Overflow> for SkeletonError {
    fn from(_: Overflow) -> Self {
        SkeletonError::Overflow
    }
}

/// Validated skeleton. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    k: usize,
    names: Vec<String>,
    matrices: Vec<IntMatrix>,
}

impl Skeleton {
    /// Checks shape, sign and commutativity, collecting every non-commuting pair.
    pub fn validate(raw: &SkeletonInput) -> Result<Self, SkeletonError> {
        if raw.k == 0 || raw.matrices.len() != raw.k {
            return Err(SkeletonError::RankMismatch { k: raw.k, found: raw.matrices.len() });
        }
        let n = raw.vertices.len();
        let mut seen = HashSet::new();
        for name in &raw.vertices {
            if name.is_empty() || !seen.insert(name.as_str()) {
                return Err(SkeletonError::BadVertexName(name.clone()));
            }
        }
        let mut mats = Vec::with_capacity(raw.k);
        for (i, m) in raw.matrices.iter().enumerate() {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(SkeletonError::NonSquare { matrix: i, n });
            }
            let mut im = IntMatrix::zeros(n);
            for (r, row) in m.iter().enumerate() {
                for (c, &x) in row.iter().enumerate() {
                    if x < 0 {
                        return Err(SkeletonError::NegativeEntry { matrix: i, row: r, col: c, value: x });
                    }
                    im.set(r, c, x as u64);
                }
            }
            mats.push(im);
        }
        let mut witnesses = Vec::new();
        for i in 0..raw.k {
            for j in i + 1..raw.k {
                let ab = mats[i].checked_mul(&mats[j])?;
                let ba = mats[j].checked_mul(&mats[i])?;
                if let Some((r, c)) = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).find(|&(r, c)| ab.get(r, c) != ba.get(r, c)) {
                    witnesses.push(CommutatorWitness { i, j, row: r, col: c, lhs: ab.get(r, c), rhs: ba.get(r, c) });
                }
            }
        }
        if !witnesses.is_empty() {
            return Err(SkeletonError::NonCommuting(witnesses));
        }
        Ok(Self { k: raw.k, names: raw.vertices.clone(), matrices: mats })
    }

    /// Builds without the commutativity check. Used for restrictions to
    /// arbitrary vertex sets, which need not commute.
    pub(crate) fn from_parts_unchecked(names: Vec<String>, matrices: Vec<IntMatrix>) -> Self {
        Self { k: matrices.len(), names, matrices }
    }

    pub fn from_matrices(names: &[&str], matrices: &[Vec<Vec<u64>>]) -> Result<Self, SkeletonError> {
        let raw = SkeletonInput {
            k: matrices.len(),
            vertices: names.iter().map(|s| s.to_string()).collect(),
            matrices: matrices.iter().map(|m| m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()).collect(),
        };
        Self::validate(&raw)
    }

    pub fn to_input(&self) -> SkeletonInput {
        SkeletonInput {
            k: self.k,
            vertices: self.names.clone(),
            matrices: self.matrices.iter().map(|m| m.rows().into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect()).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n()).map(VertexId)
    }

    pub fn matrix(&self, i: usize) -> &IntMatrix {
        &self.matrices[i]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn matrices_f64(&self) -> Vec<nalgebra::DMatrix<f64>> {
        self.matrices.iter().map(IntMatrix::to_f64).collect()
    }

    /// `A^n = ∏ A_i^{n_i}` with overflow detection.
    pub fn path_count(&self, n: &Degree) -> Result<IntMatrix, SkeletonError> {
        assert_eq!(n.k(), self.k, "degree has wrong rank");
        let mut acc = IntMatrix::identity(self.n());
        for (m, &e) in self.matrices.iter().zip(&n.0) {
            if e > 0 {
                acc = acc.checked_mul(&m.checked_pow(e)?)?;
            }
        }
        Ok(acc)
    }

    /// Whether `vΛw` is non-empty for some edge, in the union of all colours.
    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.matrices.iter().any(|m| m.get(v, w) > 0)
    }

    pub fn sinks_sources(&self) -> SourceReport {
        let n = self.n();
        let per_vertex = (0..n)
            .map(|v| VertexFlow {
                vertex: self.names[v].clone(),
                has_incoming: self.matrices.iter().map(|m| !m.row_is_zero(v)).collect(),
                has_outgoing: self.matrices.iter().map(|m| !m.col_is_zero(v)).collect(),
            })
            .collect::<Vec<_>>();
        let absolute_sources = (0..n).filter(|&v| per_vertex[v].has_incoming.iter().all(|b| !b)).collect();
        let sources = (0..n).filter(|&v| per_vertex[v].has_incoming.iter().any(|b| !b)).collect();
        let sinks = (0..n).filter(|&v| per_vertex[v].has_outgoing.iter().any(|b| !b)).collect();
        SourceReport { per_vertex, sources, sinks, absolute_sources }
    }
}

/// Per-colour flags for one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexFlow {
    pub vertex: String,
    /// Colour `i` entry: the vertex is the range of some colour-`i` edge.
    pub has_incoming: Vec<bool>,
    /// Colour `i` entry: the vertex is the source of some colour-`i` edge.
    pub has_outgoing: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceReport {
    pub per_vertex: Vec<VertexFlow>,
    /// Vertices receiving no edge of at least one colour.
    pub sources: Vec<usize>,
    /// Vertices emitting no edge of at least one colour.
    pub sinks: Vec<usize>,
    /// Vertices receiving no edges at all.
    pub absolute_sources: Vec<usize>,
}

impl SourceReport {
    pub fn has_sinks_or_sources(&self) -> bool {
        !self.sources.is_empty() || !self.sinks.is_empty()
    }
}
