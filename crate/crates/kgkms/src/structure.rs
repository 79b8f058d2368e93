//! Strongly connected components of the skeleton, hereditary sets,
//! restrictions, and the simultaneous block upper-triangular vertex order.
//!
//! Reachability follows paths: `v ≤ w` iff some path has range `v` and
//! source `w`, i.e. some `A_i(v, w) > 0` along a chain.

use crate::skeleton::Skeleton;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// Singleton lying on no cycle.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub components: Vec<Component>,
    /// `comp_of[v]` is the index of the component containing `v`.
    pub comp_of: Vec<usize>,
    reach: Vec<Vec<bool>>,
}

/// Tarjan's algorithm over an adjacency list. Components are returned
/// sorted by their smallest vertex.
pub fn strongly_connected(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }

    fn visit(st: &mut State, v: usize) {
        st.index[v] = Some(st.next);
        st.low[v] = st.next;
        st.next += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &st.adj[v] {
            match st.index[w] {
                None => {
                    visit(st, w);
                    st.low[v] = st.low[v].min(st.low[w]);
                }
                Some(iw) if st.on_stack[w] => st.low[v] = st.low[v].min(iw),
                _ => {}
            }
        }
        if Some(st.low[v]) == st.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().expect("stack holds the component");
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.out.push(comp);
        }
    }

    let n = adj.len();
    let mut st = State { adj, index: vec![None; n], low: vec![0; n], on_stack: vec![false; n], stack: Vec::new(), next: 0, out: Vec::new() };
    for v in 0..n {
        if st.index[v].is_none() {
            visit(&mut st, v);
        }
    }
    let mut out = st.out;
    out.sort_by_key(|c| c[0]);
    out
}

/// Irreducibility of a single nonnegative integer matrix; the 1×1 zero
/// matrix counts as reducible.
pub fn is_irreducible(m: &crate::matrix::IntMatrix) -> bool {
    let n = m.dim();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return m.get(0, 0) > 0;
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|r| (0..n).filter(|&c| m.get(r, c) > 0).collect()).collect();
    strongly_connected(&adj).len() == 1
}

impl Decomposition {
    pub fn new(s: &Skeleton) -> Self {
        let n = s.n();
        let adj: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&w| s.has_edge(v, w)).collect()).collect();
        let sccs = strongly_connected(&adj);
        let mut comp_of = vec![0; n];
        let components = sccs
            .into_iter()
            .enumerate()
            .map(|(ci, vs)| {
                for &v in &vs {
                    comp_of[v] = ci;
                }
                let trivial = vs.len() == 1 && !s.has_edge(vs[0], vs[0]);
                Component { vertices: vs, trivial }
            })
            .collect();
        let reach = (0..n)
            .map(|v| {
                let mut seen = vec![false; n];
                let mut stack = vec![v];
                seen[v] = true;
                while let Some(x) = stack.pop() {
                    for &y in &adj[x] {
                        if !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
                seen
            })
            .collect();
        Self { components, comp_of, reach }
    }

    pub fn n(&self) -> usize {
        self.comp_of.len()
    }

    /// `v ≤ w`.
    pub fn reaches(&self, v: usize, w: usize) -> bool {
        self.reach[v][w]
    }

    /// Indices of nontrivial components.
    pub fn nontrivial(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&c| !self.components[c].trivial).collect()
    }

    pub fn component(&self, c: usize) -> &Component {
        &self.components[c]
    }

    /// Component `a` reaches component `b`.
    pub fn comp_reaches(&self, a: usize, b: usize) -> bool {
        self.reaches(self.components[a].vertices[0], self.components[b].vertices[0])
    }

    pub fn is_hereditary(&self, set: &[usize]) -> bool {
        let mask = self.mask(set);
        set.iter().all(|&v| (0..self.n()).all(|w| mask[w] || !self.reaches(v, w)))
    }

    pub fn is_forwards_hereditary(&self, set: &[usize]) -> bool {
        let mask = self.mask(set);
        set.iter().all(|&v| (0..self.n()).all(|w| mask[w] || !self.reaches(w, v)))
    }

    /// `{w : ∃ v ∈ set, v ≤ w}`, sorted.
    pub fn hereditary_closure(&self, set: &[usize]) -> Vec<usize> {
        (0..self.n()).filter(|&w| set.iter().any(|&v| self.reaches(v, w))).collect()
    }

    fn mask(&self, set: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.n()];
        for &v in set {
            m[v] = true;
        }
        m
    }
}

/// Result of restricting a skeleton to a vertex subset.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub skeleton: Skeleton,
    /// `index_map[i]` is the original index of restricted vertex `i`.
    pub index_map: Vec<usize>,
    pub warning: Option<String>,
}

/// `SΛS`: matrices restricted to rows and columns in `set` (kept in input order).
pub fn subgraph(s: &Skeleton, d: &Decomposition, set: &[usize]) -> Restriction {
    let mut idx = set.to_vec();
    idx.sort_unstable();
    idx.dedup();
    let warning = if d.is_hereditary(&idx) || d.is_forwards_hereditary(&idx) {
        None
    } else {
        Some("vertex set is neither hereditary nor forwards hereditary; the restriction may not be a k-graph".to_string())
    };
    let names = idx.iter().map(|&v| s.name(v).to_string()).collect();
    let mats = s.matrices().iter().map(|m| m.restrict(&idx)).collect();
    Restriction { skeleton: Skeleton::from_parts_unchecked(names, mats), index_map: idx, warning }
}

/// Complement of `set`, sorted.
pub fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|v| !set.contains(v)).collect()
}

/// Whether every colour matrix of the restriction to `comp` is irreducible.
pub fn coordinatewise_irreducible(s: &Skeleton, comp: &[usize]) -> bool {
    s.matrices().iter().all(|m| is_irreducible(&m.restrict(comp)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockKind {
    /// Diagonal block equal to the component's vertex matrices.
    Component { component: usize },
    /// Strictly upper-triangular block of transient vertices.
    Transient { level: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub kind: BlockKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Level {
    /// Forwards hereditary components of the remaining graph at this level.
    pub components: Vec<usize>,
    /// Transient vertices with their depth, in output order.
    pub transient: Vec<(usize, usize)>,
    /// Vertices left for later levels.
    pub remainder: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexOrdering {
    /// `order[p]` is the original vertex placed at position `p`.
    pub order: Vec<usize>,
    pub blocks: Vec<Block>,
    pub levels: Vec<Level>,
    /// Set when the graph violates the ordering hypotheses and the order was
    /// produced anyway.
    pub outside_hypotheses: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("hypothesis violated: {hypothesis} (witness vertex {vertex})")]
    HypothesisViolation { hypothesis: String, vertex: String },
}

/// First hypothesis of the block-triangularization that fails, if any.
pub fn ordering_hypothesis_failure(s: &Skeleton, d: &Decomposition) -> Option<StructureError> {
    for c in d.nontrivial() {
        let vs = &d.component(c).vertices;
        if !coordinatewise_irreducible(s, vs) {
            let names: Vec<&str> = vs.iter().map(|&v| s.name(v)).collect();
            return Some(StructureError::HypothesisViolation {
                hypothesis: format!("component {{{}}} is not coordinatewise irreducible", names.join(",")),
                vertex: s.name(vs[0]).to_string(),
            });
        }
    }
    let flows = s.sinks_sources();
    for (v, f) in flows.per_vertex.iter().enumerate() {
        if let Some(i) = f.has_incoming.iter().position(|b| !b) {
            return Some(StructureError::HypothesisViolation {
                hypothesis: format!("vertex receives no edge of colour {}", i + 1),
                vertex: s.name(v).to_string(),
            });
        }
        if let Some(i) = f.has_outgoing.iter().position(|b| !b) {
            return Some(StructureError::HypothesisViolation {
                hypothesis: format!("vertex emits no edge of colour {}", i + 1),
                vertex: s.name(v).to_string(),
            });
        }
    }
    None
}

/// Vertex order making every vertex matrix block upper triangular.
/// Requires coordinatewise irreducible components and no sinks or sources.
pub fn order_vertices(s: &Skeleton, d: &Decomposition) -> Result<VertexOrdering, StructureError> {
    if let Some(e) = ordering_hypothesis_failure(s, d) {
        return Err(e);
    }
    Ok(build_ordering(s, d, None))
}

/// Same construction without the hypothesis check; the result is tagged when
/// a hypothesis fails. The triangular shape holds regardless.
pub fn order_vertices_relaxed(s: &Skeleton, d: &Decomposition) -> VertexOrdering {
    let tag = ordering_hypothesis_failure(s, d).map(|e| format!("outside ordering hypotheses: {e}"));
    build_ordering(s, d, tag)
}

fn build_ordering(s: &Skeleton, d: &Decomposition, tag: Option<String>) -> VertexOrdering {
    let n = s.n();
    let mut remaining = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    let mut levels = Vec::new();
    while remaining.iter().any(|&b| b) {
        let level = levels.len();
        let comps: Vec<usize> = (0..d.components.len())
            .filter(|&c| {
                let comp = d.component(c);
                !comp.trivial
                    && remaining[comp.vertices[0]]
                    && comp.vertices.iter().all(|&v| (0..n).all(|w| !remaining[w] || d.comp_of[w] == c || !d.reaches(w, v)))
            })
            .collect();
        let in_top = |v: usize| comps.contains(&d.comp_of[v]);
        for &c in &comps {
            let start = order.len();
            order.extend(d.component(c).vertices.iter().copied());
            blocks.push(Block { start, end: order.len(), kind: BlockKind::Component { component: c } });
        }
        // Transient vertices: every nontrivial component upstream of them
        // (within the remaining graph) is one of this level's components.
        let transient: Vec<usize> = (0..n)
            .filter(|&v| remaining[v] && !in_top(v))
            .filter(|&v| {
                d.nontrivial().into_iter().all(|c| {
                    let cv = d.component(c).vertices[0];
                    !remaining[cv] || comps.contains(&c) || !d.reaches(cv, v)
                })
            })
            .collect();
        let depth = transient_depths(s, &transient, in_top);
        let mut tv: Vec<(usize, usize)> = transient.iter().map(|&v| (v, depth[&v])).collect();
        tv.sort_by_key(|&(v, i)| (i, v));
        if !tv.is_empty() {
            let start = order.len();
            order.extend(tv.iter().map(|&(v, _)| v));
            blocks.push(Block { start, end: order.len(), kind: BlockKind::Transient { level } });
        }
        for &c in &comps {
            for &v in &d.component(c).vertices {
                remaining[v] = false;
            }
        }
        for &v in &transient {
            remaining[v] = false;
        }
        assert!(!comps.is_empty() || !transient.is_empty(), "ordering made no progress");
        levels.push(Level { components: comps, transient: tv, remainder: (0..n).filter(|&v| remaining[v]).collect() });
    }
    VertexOrdering { order, blocks, levels, outside_hypotheses: tag }
}

/// Longest-path depth of transient vertices. A vertex gets depth 1 when an
/// edge of some colour has range in the level's components and source at
/// it; each edge between transient vertices raises the depth at its source.
fn transient_depths(s: &Skeleton, transient: &[usize], in_top: impl Fn(usize) -> bool) -> std::collections::HashMap<usize, usize> {
    let n = s.n();
    let mut depth = std::collections::HashMap::new();
    // Transient vertices lie on no cycle, so a memoized recursion terminates.
    fn go(
        v: usize,
        s: &Skeleton,
        n: usize,
        transient: &[usize],
        in_top: &dyn Fn(usize) -> bool,
        memo: &mut std::collections::HashMap<usize, usize>,
    ) -> usize {
        if let Some(&d) = memo.get(&v) {
            return d;
        }
        let mut best = 0;
        for w in 0..n {
            if !s.has_edge(w, v) {
                continue;
            }
            if in_top(w) {
                best = best.max(1);
            } else if transient.contains(&w) && w != v {
                best = best.max(go(w, s, n, transient, in_top, memo) + 1);
            }
        }
        memo.insert(v, best);
        best
    }
    for &v in transient {
        go(v, s, n, transient, &in_top, &mut depth);
    }
    depth
}

impl VertexOrdering {
    /// Exact check that every permuted matrix is block upper triangular with
    /// component diagonal blocks and strictly upper-triangular transient blocks.
    pub fn is_block_upper_triangular(&self, s: &Skeleton) -> bool {
        let n = s.n();
        let block_of: Vec<usize> = {
            let mut b = vec![0; n];
            for (bi, blk) in self.blocks.iter().enumerate() {
                for p in blk.start..blk.end {
                    b[p] = bi;
                }
            }
            b
        };
        s.matrices().iter().all(|m| {
            let p = m.permute(&self.order);
            (0..n).all(|r| {
                (0..n).all(|c| {
                    let x = p.get(r, c);
                    if x == 0 {
                        return true;
                    }
                    let (br, bc) = (block_of[r], block_of[c]);
                    if br > bc {
                        return false;
                    }
                    if br == bc {
                        if let BlockKind::Transient { .. } = self.blocks[br].kind {
                            return r < c;
                        }
                    }
                    true
                })
            })
        })
    }
}

/// Outcome of the two-component assumption checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoComponentReport {
    /// Forwards hereditary component reaching every vertex.
    pub c: usize,
    /// The other nontrivial component.
    pub d: usize,
    pub c_forwards_hereditary: bool,
    pub d_hereditary: bool,
    /// Monochromatic connections through the intermediate vertices; vacuous
    /// (and true) when there are none.
    pub monochromatic_connections: bool,
    pub intermediate: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssumptionError {
    #[error("assumption {tag} failed: {witness}")]
    AssumptionFailed { tag: &'static str, witness: String },
}

fn fail(tag: &'static str, witness: String) -> AssumptionError {
    AssumptionError::AssumptionFailed { tag, witness }
}

/// Vertices reachable from `from` by paths of the single colour `color`,
/// including `from` itself.
pub fn color_reach(s: &Skeleton, color: usize, from: &[usize]) -> Vec<bool> {
    let n = s.n();
    let m = s.matrix(color);
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = from.to_vec();
    for &v in from {
        seen[v] = true;
    }
    while let Some(x) = stack.pop() {
        for y in 0..n {
            if m.get(x, y) > 0 && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Checks the standing assumptions for two-component graphs: exactly two
/// nontrivial components, both coordinatewise irreducible, one of which
/// reaches every vertex.
pub fn validate_two_component(s: &Skeleton, d: &Decomposition) -> Result<TwoComponentReport, AssumptionError> {
    let nt = d.nontrivial();
    if nt.len() != 2 {
        return Err(fail("A1", format!("{} nontrivial components", nt.len())));
    }
    for &c in &nt {
        if !coordinatewise_irreducible(s, &d.component(c).vertices) {
            return Err(fail("A2", format!("component containing {} is not coordinatewise irreducible", s.name(d.component(c).vertices[0]))));
        }
    }
    let reaches_all = |c: usize| (0..s.n()).all(|w| d.reaches(d.component(c).vertices[0], w));
    let (c, dd) = if reaches_all(nt[0]) {
        (nt[0], nt[1])
    } else if reaches_all(nt[1]) {
        (nt[1], nt[0])
    } else {
        let w = (0..s.n()).find(|&w| !d.reaches(d.component(nt[0]).vertices[0], w)).unwrap_or(0);
        return Err(fail("A3", format!("no component reaches every vertex (e.g. {})", s.name(w))));
    };
    let cv = d.component(c).vertices.clone();
    let dv = d.component(dd).vertices.clone();
    let intermediate: Vec<usize> = (0..s.n()).filter(|v| !cv.contains(v) && !dv.contains(v)).collect();
    let mut mono = true;
    for j in 0..s.k() {
        let from_c = color_reach(s, j, &cv);
        for &w in &intermediate {
            let to_d = color_reach(s, j, &[w]);
            if !from_c[w] || !dv.iter().any(|&x| to_d[x]) {
                mono = false;
            }
        }
    }
    Ok(TwoComponentReport {
        c,
        d: dd,
        c_forwards_hereditary: d.is_forwards_hereditary(&cv),
        d_hereditary: d.is_hereditary(&dv),
        monochromatic_connections: mono,
        intermediate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn floyd_warshall(s: &Skeleton) -> Vec<Vec<bool>> {
        let n = s.n();
        let mut r: Vec<Vec<bool>> = (0..n).map(|v| (0..n).map(|w| v == w || s.has_edge(v, w)).collect()).collect();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    #[test]
    fn dumbbell_components() {
        let s = fixtures::dumbbell();
        let d = Decomposition::new(&s);
        assert_eq!(d.components.len(), 2);
        assert!(d.components.iter().all(|c| !c.trivial));
        assert!(d.is_forwards_hereditary(&[0]));
        assert!(!d.is_hereditary(&[0]));
        assert!(d.is_hereditary(&[1]));
    }

    #[test]
    fn figure_one_components() {
        let s = fixtures::figure1();
        let d = Decomposition::new(&s);
        let nt: Vec<Vec<usize>> = d.nontrivial().iter().map(|&c| d.component(c).vertices.clone()).collect();
        assert_eq!(nt, vec![vec![0], vec![3]]);
        assert_eq!(d.components.iter().filter(|c| c.trivial).count(), 2);
        assert!(d.is_hereditary(&[3]));
        assert!(d.is_forwards_hereditary(&[0]));
        assert_eq!(d.hereditary_closure(&[0]), vec![0, 1, 2, 3]);
        assert_eq!(d.hereditary_closure(&[]), Vec::<usize>::new());
        assert_eq!(d.hereditary_closure(&[1]), vec![1, 2, 3]);
    }

    #[test]
    fn full_set_is_both_kinds_of_hereditary() {
        let s = fixtures::figure1();
        let d = Decomposition::new(&s);
        let all: Vec<usize> = (0..4).collect();
        assert!(d.is_hereditary(&all) && d.is_forwards_hereditary(&all));
        assert_eq!(d.hereditary_closure(&all), all);
    }

    #[test]
    fn positive_family_is_one_component() {
        let s = Skeleton::from_matrices(&["a", "b"], &[vec![vec![1, 1], vec![1, 1]], vec![vec![2, 1], vec![1, 2]]]).unwrap();
        let d = Decomposition::new(&s);
        assert_eq!(d.components, vec![Component { vertices: vec![0, 1], trivial: false }]);
        let o = order_vertices(&s, &d).unwrap();
        assert_eq!(o.blocks.len(), 1);
    }

    #[test]
    fn subgraph_of_figure_one_is_figure_two() {
        let s = fixtures::figure1();
        let d = Decomposition::new(&s);
        let r = subgraph(&s, &d, &[0, 1, 2]);
        assert_eq!(r.skeleton, fixtures::figure2());
        assert!(r.warning.is_none());
        let full = subgraph(&s, &d, &[0, 1, 2, 3]);
        assert_eq!(full.skeleton, s);
        let odd = subgraph(&s, &d, &[1]);
        assert!(odd.warning.is_some());
    }

    #[test]
    fn dumbbell_component_restriction() {
        let s = fixtures::dumbbell();
        let d = Decomposition::new(&s);
        let r = subgraph(&s, &d, &[0]);
        assert_eq!(r.skeleton.matrix(0).rows(), vec![vec![1]]);
        assert_eq!(r.skeleton.matrix(1).rows(), vec![vec![0]]);
    }

    #[test]
    fn figure_one_order() {
        let s = fixtures::figure1();
        let d = Decomposition::new(&s);
        let o = order_vertices(&s, &d).unwrap();
        assert_eq!(o.order, vec![0, 1, 2, 3]);
        assert_eq!(o.levels[0].transient, vec![(1, 1), (2, 2)]);
        assert!(o.is_block_upper_triangular(&s));
        assert!(o.outside_hypotheses.is_none());
    }

    #[test]
    fn dumbbell_order_is_rejected() {
        let s = fixtures::dumbbell();
        let d = Decomposition::new(&s);
        match order_vertices(&s, &d) {
            Err(StructureError::HypothesisViolation { hypothesis, vertex }) => {
                assert!(hypothesis.contains("coordinatewise irreducible"));
                assert_eq!(vertex, "u");
            }
            other => panic!("unexpected {other:?}"),
        }
        let relaxed = order_vertices_relaxed(&s, &d);
        assert!(relaxed.outside_hypotheses.is_some());
        assert!(relaxed.is_block_upper_triangular(&s));
    }

    #[test]
    fn graph_with_sources_is_tagged() {
        let s = fixtures::figure2();
        let d = Decomposition::new(&s);
        assert!(order_vertices(&s, &d).is_err());
        let o = order_vertices_relaxed(&s, &d);
        assert!(o.outside_hypotheses.as_deref().unwrap().contains("outside ordering hypotheses"));
        assert!(o.is_block_upper_triangular(&s));
    }

    #[test]
    fn two_component_checks() {
        let s = fixtures::figure1();
        let d = Decomposition::new(&s);
        let r = validate_two_component(&s, &d).unwrap();
        assert_eq!(d.component(r.c).vertices, vec![0]);
        assert_eq!(d.component(r.d).vertices, vec![3]);
        assert!(r.c_forwards_hereditary && r.d_hereditary && r.monochromatic_connections);
        assert_eq!(r.intermediate, vec![1, 2]);

        let s = fixtures::two_vertex_blue();
        let d = Decomposition::new(&s);
        let r = validate_two_component(&s, &d).unwrap();
        assert!(r.intermediate.is_empty() && r.monochromatic_connections);

        let s = fixtures::three_components();
        let d = Decomposition::new(&s);
        assert!(matches!(validate_two_component(&s, &d), Err(AssumptionError::AssumptionFailed { tag: "A1", .. })));
    }

    #[test]
    fn irreducibility() {
        use crate::matrix::IntMatrix;
        assert!(!is_irreducible(&IntMatrix::from_rows(&[vec![0]])));
        assert!(is_irreducible(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])));
        assert!(!is_irreducible(&IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]])));
    }

    fn arb_skeleton() -> impl Strategy<Value = Skeleton> {
        // Polynomials in one matrix commute with it.
        (1usize..=8, proptest::collection::vec(0u64..2, 64), 0u64..3, 1u64..3).prop_map(|(n, bits, c0, c1)| {
            let rows: Vec<Vec<u64>> = (0..n).map(|r| (0..n).map(|c| bits[r * 8 + c]).collect()).collect();
            let a = crate::matrix::IntMatrix::from_rows(&rows);
            let a2 = a.checked_mul(&a).unwrap();
            let b: Vec<Vec<u64>> = (0..n).map(|r| (0..n).map(|c| c1 * a.get(r, c) + a2.get(r, c) + if r == c { c0 } else { 0 }).collect()).collect();
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            Skeleton::from_matrices(&refs, &[rows, b]).unwrap()
        })
    }

    proptest! {
        #[test]
        fn reach_matches_floyd_warshall(s in arb_skeleton()) {
            let d = Decomposition::new(&s);
            let fw = floyd_warshall(&s);
            for v in 0..s.n() {
                for w in 0..s.n() {
                    prop_assert_eq!(d.reaches(v, w), fw[v][w]);
                    prop_assert_eq!(d.comp_of[v] == d.comp_of[w], fw[v][w] && fw[w][v]);
                }
            }
        }

        #[test]
        fn hereditary_matches_definition(s in arb_skeleton(), mask in proptest::collection::vec(any::<bool>(), 8)) {
            let d = Decomposition::new(&s);
            let set: Vec<usize> = (0..s.n()).filter(|&v| mask[v]).collect();
            let out = complement(s.n(), &set);
            let expect = set.iter().all(|&v| out.iter().all(|&w| !d.reaches(v, w)));
            prop_assert_eq!(d.is_hereditary(&set), expect);
            let closure = d.hereditary_closure(&set);
            prop_assert!(d.is_hereditary(&closure));
            prop_assert!(set.iter().all(|v| closure.contains(v)));
        }

        #[test]
        fn relaxed_order_is_always_triangular(s in arb_skeleton()) {
            let d = Decomposition::new(&s);
            let o = order_vertices_relaxed(&s, &d);
            let mut sorted = o.order.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..s.n()).collect::<Vec<_>>());
            prop_assert!(o.is_block_upper_triangular(&s));
            // the component order is acyclic, so some component is forwards hereditary
            prop_assert!(d.components.iter().any(|c| d.is_forwards_hereditary(&c.vertices)));
        }
    }
}
