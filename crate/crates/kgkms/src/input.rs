//! The JSON input document: a skeleton, optionally with concrete edges and
//! squares, optionally with vertex vectors to check.

use crate::path2::{ConcreteTwoGraph, EdgeInput, SquareError, SquareInput};
use crate::skeleton::{Skeleton, SkeletonError, SkeletonInput};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateInput {
    #[serde(default)]
    pub label: Option<String>,
    pub beta: f64,
    pub m: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub k: usize,
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeInput>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squares: Option<Vec<SquareInput>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<StateInput>,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed input document: {0}")]
    Parse(String),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Squares(#[from] SquareError),
    #[error("document needs either \"matrices\" or \"edges\"")]
    NoGraph,
    #[error("\"squares\" given without \"edges\"")]
    SquaresWithoutEdges,
    #[error("edges disagree with the supplied matrices at colour {color}, ({row}, {col}): {edges} edges vs matrix entry {matrix}")]
    Inconsistent { color: usize, row: usize, col: usize, edges: u64, matrix: u64 },
    #[error("state {index} has {found} entries, expected {expected}")]
    StateLength { index: usize, found: usize, expected: usize },
}

impl GraphDocument {
    pub fn parse(src: &str) -> Result<Self, InputError> {
        serde_json::from_str(src).map_err(|e| InputError::Parse(e.to_string()))
    }

    /// The validated skeleton, derived from the edges when no matrices are given.
    pub fn skeleton(&self) -> Result<Skeleton, InputError> {
        for (index, st) in self.states.iter().enumerate() {
            if st.m.len() != self.vertices.len() {
                return Err(InputError::StateLength { index, found: st.m.len(), expected: self.vertices.len() });
            }
        }
        match (&self.matrices, self.concrete()?) {
            (Some(m), g) => {
                let s = Skeleton::validate(&SkeletonInput { k: self.k, vertices: self.vertices.clone(), matrices: m.clone() })?;
                if let Some(g) = g {
                    let derived = g.skeleton();
                    for c in 0..s.k() {
                        for r in 0..s.n() {
                            for col in 0..s.n() {
                                let (e, mm) = (derived.matrix(c).get(r, col), s.matrix(c).get(r, col));
                                if e != mm {
                                    return Err(InputError::Inconsistent { color: c, row: r, col, edges: e, matrix: mm });
                                }
                            }
                        }
                    }
                }
                Ok(s)
            }
            (None, Some(g)) => Ok(g.skeleton().clone()),
            (None, None) => Err(InputError::NoGraph),
        }
    }

    /// The concrete 2-graph, if edges are present.
    pub fn concrete(&self) -> Result<Option<ConcreteTwoGraph>, InputError> {
        match (&self.edges, &self.squares) {
            (None, None) => Ok(None),
            (None, Some(_)) => Err(InputError::SquaresWithoutEdges),
            (Some(e), sq) => Ok(Some(ConcreteTwoGraph::new(self.k, &self.vertices, e, sq.as_deref().unwrap_or(&[]))?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(GraphDocument::parse("{\"k\": 2,"), Err(InputError::Parse(_))));
    }

    #[test]
    fn concrete_fixture_yields_figure_one_skeleton() {
        let d = GraphDocument::parse(fixtures::FIGURE1_CONCRETE).unwrap();
        assert_eq!(d.skeleton().unwrap(), fixtures::figure1());
    }

    #[test]
    fn mismatched_matrices_are_rejected() {
        let mut d = GraphDocument::parse(fixtures::FIGURE2_CONCRETE).unwrap();
        d.matrices = Some(vec![vec![vec![2, 6, 1], vec![0, 0, 0], vec![0, 0, 0]], vec![vec![6, 18, 0], vec![0, 0, 0], vec![0, 0, 0]]]);
        assert!(matches!(d.skeleton(), Err(InputError::Skeleton(_)) | Err(InputError::Inconsistent { .. })));
    }

    #[test]
    fn state_length_is_checked() {
        let mut d = GraphDocument::parse(fixtures::FIGURE1).unwrap();
        d.states.push(StateInput { label: None, beta: 1.0, m: vec![1.0] });
        assert!(matches!(d.skeleton(), Err(InputError::StateLength { .. })));
    }
}
