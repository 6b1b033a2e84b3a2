//! The small graphs used throughout the test and self-check suites.

use crate::graph::Graph;

/// One vertex `v` with two loops `e`, `f` (the rank-2 rose).
pub fn r2() -> Graph {
    Graph::from_parts(&["v"], &[("e", "v", "v"), ("f", "v", "v")]).unwrap()
}

/// `v1 --e--> v2`, with `v2` a sink.
pub fn a2() -> Graph {
    Graph::from_parts(&["v1", "v2"], &[("e", "v1", "v2")]).unwrap()
}

/// `v1 --e--> v2 --f--> v3`, with `v3` a sink.
pub fn a3() -> Graph {
    Graph::from_parts(
        &["v1", "v2", "v3"],
        &[("e", "v1", "v2"), ("f", "v2", "v3")],
    )
    .unwrap()
}

/// Vertices `u`, `w`; a loop `g` at `u` and an edge `h: u -> w`; `w` a sink.
pub fn t_graph() -> Graph {
    Graph::from_parts(&["u", "w"], &[("g", "u", "u"), ("h", "u", "w")]).unwrap()
}

/// A single vertex with a single loop `g`; condition (L) fails here.
pub fn single_loop() -> Graph {
    Graph::from_parts(&["v"], &[("g", "v", "v")]).unwrap()
}

/// The whole catalog, by name.
pub fn all() -> Vec<(&'static str, Graph)> {
    vec![
        ("R2", r2()),
        ("A2", a2()),
        ("A3", a3()),
        ("T", t_graph()),
        ("single-loop", single_loop()),
    ]
}

/// The catalog members that satisfy condition (L).
pub fn condition_l_graphs() -> Vec<(&'static str, Graph)> {
    vec![("R2", r2()), ("A2", a2()), ("A3", a3()), ("T", t_graph())]
}
