//! Small named graphs used by the tests, the acceptance run and the CLI.

use crate::graph::Graph;

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::unweighted(n, &edges).expect("path is a simple graph")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::unweighted(n, &edges).expect("cycle is a simple graph")
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::unweighted(n, &edges).expect("complete graph is simple")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<_> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
    Graph::unweighted(a + b, &edges).expect("complete bipartite graph is simple")
}

/// Outer 5-cycle, spokes `i to i+5`, inner pentagram from `5+i` to `5+(i+2)%5`.
pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
    }
    for i in 0..5 {
        edges.push((i, i + 5));
    }
    for i in 0..5 {
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::unweighted(10, &edges).expect("Petersen graph is simple")
}

/// A connected irregular graph on eight vertices, drawn once at random and
/// frozen so every run sees the same edges.
pub fn random_eight() -> Graph {
    let edges = [
        (0, 3),
        (0, 5),
        (1, 2),
        (1, 6),
        (2, 5),
        (2, 7),
        (3, 4),
        (3, 6),
        (4, 7),
        (5, 6),
    ];
    Graph::unweighted(8, &edges).expect("frozen random graph is simple")
}

/// Triangle with a pendant vertex and unequal weights.
pub fn weighted_paw() -> Graph {
    Graph::new(4, &[(0, 1), (1, 2), (0, 2), (2, 3)], Some(vec![1.0, 2.0, 0.5, 1.5]))
        .expect("weighted paw is valid")
}

/// The unweighted fixtures, by name.
pub fn standard() -> Vec<(&'static str, Graph)> {
    vec![
        ("P2", path(2)),
        ("C3", cycle(3)),
        ("C6", cycle(6)),
        ("K4", complete(4)),
        ("K3,3", complete_bipartite(3, 3)),
        ("Petersen", petersen()),
        ("random8", random_eight()),
    ]
}

/// Looks a fixture up by name, including the weighted one.
pub fn by_name(name: &str) -> Option<Graph> {
    if name == "paw" {
        return Some(weighted_paw());
    }
    standard().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g)
}
