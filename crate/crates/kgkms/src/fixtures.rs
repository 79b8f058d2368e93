//! Bundled example graphs. The JSON sources live in the crate's `fixtures/`
//! directory and are compiled in so tests and examples need no file access.
//!
//! Vertex order for the four-vertex graphs is `u, v, w, x`.

use crate::input::GraphDocument;
use crate::path2::ConcreteTwoGraph;
use crate::skeleton::Skeleton;

pub const FIGURE1: &str = include_str!("../fixtures/figure1.json");
pub const FIGURE2: &str = include_str!("../fixtures/figure2.json");
pub const FIGURE3: &str = include_str!("../fixtures/figure3.json");
pub const SINGLE_VERTEX: &str = include_str!("../fixtures/single_vertex.json");
pub const DUMBBELL: &str = include_str!("../fixtures/dumbbell.json");
pub const THREE_COMPONENTS: &str = include_str!("../fixtures/three_components.json");
pub const NON_COMMUTING: &str = include_str!("../fixtures/non_commuting.json");
pub const TWO_VERTEX_BLUE: &str = include_str!("../fixtures/two_vertex_blue.json");
pub const DOMINANCE_FAILS: &str = include_str!("../fixtures/dominance_fails.json");
pub const FIGURE1_CONCRETE: &str = include_str!("../fixtures/figure1_concrete.json");
pub const FIGURE1_CONCRETE_ALT: &str = include_str!("../fixtures/figure1_concrete_alt.json");
pub const FIGURE2_CONCRETE: &str = include_str!("../fixtures/figure2_concrete.json");
pub const FIGURE2_CONCRETE_ALT: &str = include_str!("../fixtures/figure2_concrete_alt.json");
pub const SINGLE_VERTEX_CONCRETE: &str = include_str!("../fixtures/single_vertex_concrete.json");

fn skeleton(src: &str) -> Skeleton {
    GraphDocument::parse(src).and_then(|d| d.skeleton()).expect("bundled fixture is valid")
}

fn concrete(src: &str) -> ConcreteTwoGraph {
    GraphDocument::parse(src)
        .and_then(|d| d.concrete())
        .map(|g| g.expect("fixture has edges"))
        .expect("bundled fixture is valid")
}

/// Two nontrivial components `{u}`, `{x}` joined through `v`, `w`.
pub fn figure1() -> Skeleton {
    skeleton(FIGURE1)
}

/// `figure1` with `x` removed.
pub fn figure2() -> Skeleton {
    skeleton(FIGURE2)
}

/// One component `{u}` critical in both colours, reaching everything.
pub fn figure3() -> Skeleton {
    skeleton(FIGURE3)
}

pub fn single_vertex() -> Skeleton {
    skeleton(SINGLE_VERTEX)
}

/// Two blue loops joined by a single red edge.
pub fn dumbbell() -> Skeleton {
    skeleton(DUMBBELL)
}

pub fn three_components() -> Skeleton {
    skeleton(THREE_COMPONENTS)
}

/// Two vertices, a blue edge between them, red loops of equal weight.
pub fn two_vertex_blue() -> Skeleton {
    skeleton(TWO_VERTEX_BLUE)
}

/// Hereditary `{v}` whose red radius ties with the other component.
pub fn dominance_fails() -> Skeleton {
    skeleton(DOMINANCE_FAILS)
}

pub fn figure1_concrete() -> ConcreteTwoGraph {
    concrete(FIGURE1_CONCRETE)
}

/// Same skeleton as `figure1_concrete` with a different square bijection.
pub fn figure1_concrete_alt() -> ConcreteTwoGraph {
    concrete(FIGURE1_CONCRETE_ALT)
}

pub fn figure2_concrete() -> ConcreteTwoGraph {
    concrete(FIGURE2_CONCRETE)
}

pub fn figure2_concrete_alt() -> ConcreteTwoGraph {
    concrete(FIGURE2_CONCRETE_ALT)
}

pub fn single_vertex_concrete() -> ConcreteTwoGraph {
    concrete(SINGLE_VERTEX_CONCRETE)
}

/// All bundled skeletons that validate, with a short label.
pub fn valid_skeletons() -> Vec<(&'static str, Skeleton)> {
    vec![
        ("figure1", figure1()),
        ("figure2", figure2()),
        ("figure3", figure3()),
        ("single_vertex", single_vertex()),
        ("dumbbell", dumbbell()),
        ("three_components", three_components()),
        ("two_vertex_blue", two_vertex_blue()),
        ("dominance_fails", dominance_fails()),
    ]
}
