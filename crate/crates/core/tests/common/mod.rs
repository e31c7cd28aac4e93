#![allow(dead_code)]

use graph_zeta::{Complex64, ComplexMatrix, Graph};
use proptest::prelude::*;

/// Connected graphs on 2..=max_v vertices: a random spanning tree plus a
/// random subset of the remaining pairs.
pub fn connected_graph(max_v: usize) -> impl Strategy<Value = Graph> {
    (2..=max_v).prop_flat_map(|v| {
        let pairs = v * (v - 1) / 2;
        (
            Just(v),
            proptest::collection::vec(0..1000usize, v - 1),
            proptest::collection::vec(prop::bool::weighted(0.35), pairs),
        )
            .prop_map(|(v, parents, extra)| {
                let mut edges = Vec::new();
                for i in 1..v {
                    edges.push((parents[i - 1] % i, i));
                }
                let mut k = 0;
                for i in 0..v {
                    for j in i + 1..v {
                        if extra[k] && !edges.contains(&(i, j)) {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::unweighted(v, &edges).unwrap()
            })
    })
}

pub fn weighted_graph(max_v: usize) -> impl Strategy<Value = Graph> {
    connected_graph(max_v).prop_flat_map(|g| {
        let b = g.num_edges();
        (Just(g), proptest::collection::vec(0.2f64..4.0, b))
            .prop_map(|(g, w)| Graph::new(g.num_vertices(), g.edges(), Some(w)).unwrap())
    })
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Laplace expansion along the first row; exponential but independent of
/// any factorization.
pub fn cofactor_det(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    if n == 1 {
        return m[(0, 0)];
    }
    let mut total = c(0.0, 0.0);
    for j in 0..n {
        let minor = ComplexMatrix::from_fn(n - 1, n - 1, |r, k| m[(r + 1, if k < j { k } else { k + 1 })]);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += m[(0, j)] * sign * cofactor_det(&minor);
    }
    total
}

/// Dense `L = D − C` (or `D_w − C_w`) assembled straight from the edge list.
pub fn laplacian_oracle(g: &Graph, weighted: bool) -> Vec<Vec<f64>> {
    let n = g.num_vertices();
    let mut l = vec![vec![0.0; n]; n];
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        let w = if weighted { g.weight(k) } else { 1.0 };
        l[i][j] -= w;
        l[j][i] -= w;
        l[i][i] += w;
        l[j][j] += w;
    }
    l
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}
