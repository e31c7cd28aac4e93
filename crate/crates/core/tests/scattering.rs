mod common;

use common::{c, cofactor_det, connected_graph, laplacian_oracle, rel, weighted_graph};
use graph_zeta::laplacian::{build_laplacian, LaplacianKind};
use graph_zeta::linalg::eig_general;
use graph_zeta::scattering::{
    build_u, det_u_closed, reconstruct_eigenvector, secular_z_s, secular_zeros, secular_zeros_expanded,
};
use graph_zeta::{Complex64, ComplexMatrix, Graph};
use proptest::prelude::*;

const STD: LaplacianKind = LaplacianKind::Standard;
const GEN: LaplacianKind = LaplacianKind::Generalized;

fn scales(g: &Graph, weighted: bool) -> Vec<f64> {
    let mut s = vec![0.0; g.num_vertices()];
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        let w = if weighted { g.weight(k) } else { 1.0 };
        s[i] += w;
        s[j] += w;
    }
    s
}

/// `U` assembled directly from the edge list: bond `2k` runs `i → j` and
/// `2k + 1` runs `j → i` for edge `k = (i, j)`.
fn u_oracle(g: &Graph, lambda: Complex64, weighted: bool) -> ComplexMatrix {
    let s = scales(g, weighted);
    let ends = |d: usize| {
        let (i, j) = g.edges()[d / 2];
        if d.is_multiple_of(2) {
            (i, j)
        } else {
            (j, i)
        }
    };
    let w = |d: usize| if weighted { g.weight(d / 2) } else { 1.0 };
    let n = 2 * g.num_edges();
    ComplexMatrix::from_fn(n, n, |e, d| {
        let (_, td) = ends(d);
        let (oe, _) = ends(e);
        if oe != td {
            return c(0.0, 0.0);
        }
        let sv = s[td];
        let phase = (sv + c(0.0, 1.0) * (sv - lambda)) / (sv - c(0.0, 1.0) * (sv - lambda));
        let back = if e ^ 1 == d { 1.0 } else { 0.0 };
        c(0.0, 1.0) * (back - (1.0 + phase) * (w(e) * w(d)).sqrt() / sv)
    })
}

/// Eigenvalues ±i of `U` that do not depend on λ: one pair per independent
/// cycle beyond the first, plus one more (two on bipartite graphs).
fn cycle_current_modes(g: &Graph) -> usize {
    let excess = 2 * g.num_edges() as i64 - 2 * g.num_vertices() as i64;
    (excess + if g.is_bipartite() { 2 } else { 1 }).max(0) as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operator_matches_edge_list(g in weighted_graph(6), re in -4.0f64..10.0, im in -3.0f64..3.0) {
        let lam = c(re, im);
        for (kind, weighted) in [(STD, false), (GEN, true)] {
            let u = build_u(&g, lam, kind).unwrap().matrix;
            let oracle = u_oracle(&g, lam, weighted);
            prop_assert!(u.sub(&oracle).unwrap().max_abs() < 1e-13);
        }
    }

    #[test]
    fn unitary_on_real_axis(g in weighted_graph(7), x in -10.0f64..20.0) {
        for kind in [STD, GEN] {
            prop_assert!(build_u(&g, c(x, 0.0), kind).unwrap().unitarity_defect() < 1e-10);
        }
    }

    #[test]
    fn determinant_closed_form(g in weighted_graph(6), re in -4.0f64..10.0, im in -3.0f64..3.0) {
        let lam = c(re, im);
        for kind in [STD, GEN] {
            let direct = build_u(&g, lam, kind).unwrap().determinant().unwrap();
            prop_assert!(rel(direct, det_u_closed(&g, lam, kind).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn contracting_apart_from_cycle_currents(g in connected_graph(6), re in -2.0f64..12.0, im in 0.05f64..3.0) {
        let u = build_u(&g, c(re, -im), STD).unwrap();
        let values = eig_general(&u.matrix).unwrap().eigenvalues;
        let mut on_circle = 0;
        for mu in values {
            if mu.norm() > 1.0 - 1e-9 {
                prop_assert!((mu.re).abs() < 1e-7 && (mu.im.abs() - 1.0).abs() < 1e-7, "{}", mu);
                on_circle += 1;
            }
        }
        prop_assert_eq!(on_circle, cycle_current_modes(&g));
    }

    #[test]
    fn secular_function_real_and_closed_form(g in weighted_graph(6), x in -6.0f64..14.0) {
        let z = secular_z_s(&g, c(x, 0.0), GEN).unwrap();
        let l = laplacian_oracle(&g, true);
        let n = g.num_vertices();
        let shifted = ComplexMatrix::from_fn(n, n, |i, j| c(if i == j { x } else { 0.0 } - l[i][j], 0.0));
        let s = scales(&g, true);
        let norm: f64 = s.iter().map(|&v| (v * v + (v - x) * (v - x)).sqrt()).product();
        let oracle = cofactor_det(&shifted) / norm;
        prop_assert!(z.im.abs() < 1e-9 * z.norm().max(1.0), "{}", z);
        prop_assert!((z - oracle).norm() < 1e-9 * oracle.norm().max(1e-3), "{} vs {}", z, oracle);
    }

    #[test]
    fn unit_weights_reproduce_standard_operator(g in connected_graph(7), re in -4.0f64..10.0, im in -3.0f64..3.0) {
        let unit = g.with_unit_weights();
        let lam = c(re, im);
        let a = build_u(&g, lam, STD).unwrap().matrix;
        let b = build_u(&unit, lam, GEN).unwrap().matrix;
        prop_assert_eq!(a.as_slice(), b.as_slice());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn zeros_are_the_spectrum(g in weighted_graph(6)) {
        for kind in [STD, GEN] {
            let spectrum = build_laplacian(&g, kind).unwrap().spectrum().unwrap().real_values();
            let zeros = secular_zeros_expanded(&g, kind).unwrap();
            prop_assert_eq!(zeros.len(), spectrum.len());
            for (a, b) in zeros.iter().zip(&spectrum) {
                prop_assert!((a - b).abs() < 1e-7, "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn reconstructed_vectors_are_eigenvectors(g in weighted_graph(6)) {
        let op = build_laplacian(&g, GEN).unwrap();
        for zero in secular_zeros(&g, GEN).unwrap() {
            let vectors = reconstruct_eigenvector(&g, zero.lambda, GEN).unwrap();
            prop_assert_eq!(vectors.len(), zero.multiplicity);
            for psi in vectors {
                let lpsi = op.matrix.matvec(&psi).unwrap();
                let r: f64 = lpsi.iter().zip(&psi).map(|(a, b)| (a - b * zero.lambda).norm_sqr()).sum::<f64>().sqrt();
                let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                prop_assert!(r < 1e-7 * n);
            }
        }
    }
}

#[test]
fn secular_function_limits() {
    for (_, g) in graph_zeta::fixtures::standard() {
        let v = g.num_vertices() as i32;
        let plus = secular_z_s(&g, c(1e7, 0.0), STD).unwrap();
        let minus = secular_z_s(&g, c(-1e7, 0.0), STD).unwrap();
        assert!((plus - 1.0).norm() < 1e-5);
        assert!((minus - (-1.0f64).powi(v)).norm() < 1e-5);
    }
}

#[test]
fn pole_is_an_error() {
    let g = graph_zeta::fixtures::complete(4);
    assert!(matches!(build_u(&g, c(3.0, 3.0), STD), Err(graph_zeta::Error::Pole { .. })));
    assert!(matches!(build_u(&g, c(3.0, -3.0), STD), Err(graph_zeta::Error::Pole { .. })));
}

#[test]
fn diamond_double_zero() {
    // equal small weights put a near-double eigenvalue of U at 1 beside λ = 4
    let g = Graph::new(4, &[(0, 1), (0, 2), (1, 3), (0, 3), (2, 3)], Some(vec![0.2; 5])).unwrap();
    let zeros = secular_zeros_expanded(&g, STD).unwrap();
    for (a, b) in zeros.iter().zip([0.0, 2.0, 4.0, 4.0]) {
        assert!((a - b).abs() < 1e-7, "{zeros:?}");
    }
    assert_eq!(zeros.len(), 4);
}
