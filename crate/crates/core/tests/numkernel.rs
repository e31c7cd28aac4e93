mod common;

use common::{c, cofactor_det, connected_graph, laplacian_oracle, rel, weighted_graph};
use graph_zeta::laplacian::{build_laplacian, LaplacianKind};
use graph_zeta::linalg::{determinant, eig_general, eig_symmetric, multiset_distance};
use graph_zeta::{Complex64, ComplexMatrix};
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| ComplexMatrix::from_vec(n, n, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
}

/// `exp(iH)` for Hermitian `H` via its eigen-decomposition is unitary.
fn unitary(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n).prop_map(move |a| {
        let h = ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
        let (values, vecs) = graph_zeta::linalg::eig_hermitian(&h).unwrap();
        let phases = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, 3.0 * values[i])
            } else {
                c(0.0, 0.0)
            }
        });
        vecs.matmul(&phases).unwrap().matmul(&vecs.adjoint()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lu_matches_cofactor_expansion(m in (1usize..=6).prop_flat_map(matrix)) {
        let lu = determinant(&m).unwrap();
        let oracle = cofactor_det(&m);
        prop_assert!((lu - oracle).norm() <= 1e-11 * oracle.norm().max(1.0));
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(8), b in matrix(8)) {
        let lhs = determinant(&a.matmul(&b).unwrap()).unwrap();
        let rhs = determinant(&a).unwrap() * determinant(&b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1e-3));
    }

    #[test]
    fn unitary_eigenvalues_on_circle(u in (2usize..=12).prop_flat_map(unitary)) {
        prop_assert!(u.unitarity_defect().unwrap() < 1e-12);
        for mu in eig_general(&u).unwrap().eigenvalues {
            prop_assert!((mu.norm() - 1.0).abs() < 1e-10, "{}", mu.norm());
        }
    }

    #[test]
    fn eigenvalue_product_is_determinant(m in (2usize..=32).prop_flat_map(matrix)) {
        let values = eig_general(&m).unwrap().eigenvalues;
        let product: Complex64 = values.iter().product();
        let det = determinant(&m).unwrap();
        prop_assert!(rel(product, det) < 1e-8, "{} vs {}", product, det);
        let trace: Complex64 = values.iter().sum();
        prop_assert!((trace - m.trace()).norm() < 1e-9 * (m.rows() as f64));
    }

    #[test]
    fn laplacian_matches_edge_list(g in connected_graph(7)) {
        let op = build_laplacian(&g, LaplacianKind::Standard).unwrap();
        let oracle = laplacian_oracle(&g, false);
        for i in 0..g.num_vertices() {
            for j in 0..g.num_vertices() {
                prop_assert_eq!(op.matrix[(i, j)], c(oracle[i][j], 0.0));
            }
        }
    }

    #[test]
    fn characteristic_polynomial_is_spectral_product(g in weighted_graph(7), re in -3.0f64..9.0, im in -2.0f64..2.0) {
        let op = build_laplacian(&g, LaplacianKind::Generalized).unwrap();
        let lam = c(re, im);
        let spectrum = op.spectrum().unwrap().real_values();
        let product: Complex64 = spectrum.iter().map(|&x| lam - x).product();
        prop_assert!(rel(op.char_poly_value(lam).unwrap(), product) < 1e-9);
    }

    #[test]
    fn laplacian_spectrum_basics(g in weighted_graph(7)) {
        let op = build_laplacian(&g, LaplacianKind::Generalized).unwrap();
        let s = op.spectrum().unwrap();
        let values = s.real_values();
        prop_assert!(values[0].abs() < 1e-10);
        prop_assert!(values[1] > 1e-10, "connected graphs have a simple zero eigenvalue");
        prop_assert!(s.residual.unwrap() < 1e-10);
        prop_assert_eq!(op.zero_multiplicity().unwrap(), 1);
        let sum: f64 = values.iter().sum();
        let weight_sum: f64 = (0..g.num_edges()).map(|k| g.weight(k)).sum();
        prop_assert!((sum - 2.0 * weight_sum).abs() < 1e-9 * sum.max(1.0));
    }
}

#[test]
fn symmetric_and_general_solvers_agree() {
    for (_, g) in graph_zeta::fixtures::standard() {
        let op = build_laplacian(&g, LaplacianKind::Standard).unwrap();
        let sym = op.spectrum().unwrap().eigenvalues;
        let gen = eig_general(&op.matrix).unwrap().eigenvalues;
        assert!(multiset_distance(&sym, &gen) < 1e-9);
    }
}

#[test]
fn rejects_asymmetric_input() {
    let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
    assert!(matches!(eig_symmetric(&m), Err(graph_zeta::Error::NotSymmetric(_))));
}

#[test]
fn known_spectra() {
    // C_n: 2 − 2cos(2πk/n); K_n: 0 and n with multiplicity n − 1
    let c6 = build_laplacian(&graph_zeta::fixtures::cycle(6), LaplacianKind::Standard).unwrap();
    let mut expected: Vec<f64> = (0..6).map(|k| 2.0 - 2.0 * (std::f64::consts::PI * k as f64 / 3.0).cos()).collect();
    expected.sort_by(f64::total_cmp);
    for (a, b) in c6.spectrum().unwrap().real_values().iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
    }
    let k5 = build_laplacian(&graph_zeta::fixtures::complete(5), LaplacianKind::Standard).unwrap();
    let clusters = k5.spectrum().unwrap().clusters();
    assert_eq!(clusters.len(), 2);
    assert_eq!(clusters[1].1, 4);
    assert!((clusters[1].0.re - 5.0).abs() < 1e-12);
}
