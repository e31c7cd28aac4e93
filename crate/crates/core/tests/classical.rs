mod common;

use common::{c, connected_graph, weighted_graph};
use graph_zeta::classical::{
    build_m, build_m_sharp, classical_secular_z_m, connection_rhs, evolve, evolve_trajectory, m_sharp_combinatorial_defect,
    m_sharp_spectrum_via_laplacian, mixing_gap,
};
use graph_zeta::fixtures;
use graph_zeta::laplacian::LaplacianKind;
use graph_zeta::linalg::{eig_general, multiset_distance};
use graph_zeta::orbits::{enumerate_orbits, trace_power_via_orbits};
use graph_zeta::scattering::build_u;
use proptest::prelude::*;

const GEN: LaplacianKind = LaplacianKind::Generalized;

fn distribution(n: usize, raw: &[f64]) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|k| raw[k % raw.len()]).collect();
    let total: f64 = v.iter().sum();
    v.iter().map(|x| x / total).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn map_is_bistochastic_and_squared_modulus(g in weighted_graph(7), x in -10.0f64..20.0) {
        let m = build_m(&g, c(x, 0.0), GEN).unwrap();
        prop_assert!(m.bistochastic_defect() < 1e-10);
        let u = build_u(&g, c(x, 0.0), GEN).unwrap().matrix;
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                prop_assert!((m.matrix[(i, j)].re - u[(i, j)].norm_sqr()).abs() < 1e-15);
                prop_assert!(m.matrix[(i, j)].re >= 0.0 && m.matrix[(i, j)].im == 0.0);
            }
        }
    }

    #[test]
    fn evolution_preserves_probability(g in weighted_graph(6), x in -5.0f64..10.0, raw in proptest::collection::vec(0.01f64..1.0, 1..40), steps in 1usize..30) {
        let m = build_m(&g, c(x, 0.0), GEN).unwrap();
        let rho = distribution(m.dim(), &raw);
        let traj = evolve_trajectory(&m, &rho, steps).unwrap();
        prop_assert_eq!(traj.len(), steps + 1);
        for state in &traj {
            prop_assert!((state.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(state.iter().all(|&p| p >= 0.0));
        }
        let last = evolve(&m, &rho, steps).unwrap();
        for (a, b) in last.iter().zip(traj.last().unwrap()) {
            prop_assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn map_traces_are_orbit_sums(g in connected_graph(5), x in -5.0f64..10.0) {
        // the orbit expansion of tr Uⁿ holds for any bond matrix, including |U|²
        let m = build_m(&g, c(x, 0.0), LaplacianKind::Standard).unwrap();
        let cat = enumerate_orbits(&g.directed_bonds(), 6).unwrap();
        let mut power = m.matrix.clone();
        for n in 2..=6 {
            power = power.matmul(&m.matrix).unwrap();
            let orbit = trace_power_via_orbits(&cat, &m.matrix, n).unwrap();
            prop_assert!((orbit - power.trace()).norm() < 1e-10 * power.trace().norm().max(1.0));
        }
    }

    #[test]
    fn spectrum_inside_unit_disc(g in weighted_graph(6), x in -5.0f64..10.0) {
        let m = build_m(&g, c(x, 0.0), GEN).unwrap();
        let values = m.eigenvalues().unwrap();
        prop_assert!(values.iter().all(|z| z.norm() < 1.0 + 1e-9));
        prop_assert!(values.iter().any(|z| (z - 1.0).norm() < 1e-9));
    }

    #[test]
    fn connection_identity(which in 0usize..4, re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let g = [fixtures::complete(4), fixtures::petersen(), fixtures::complete_bipartite(3, 3), fixtures::complete(5)][which].clone();
        let m = build_m_sharp(&g).unwrap();
        let mu = c(re, im);
        let lhs = classical_secular_z_m(&m, mu).unwrap();
        let rhs = connection_rhs(&g, mu).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0));
    }
}

#[test]
fn sharp_map_is_non_backtracking_walk() {
    for g in [fixtures::complete(4), fixtures::petersen(), fixtures::complete_bipartite(3, 3)] {
        let m = build_m_sharp(&g).unwrap();
        assert!(m_sharp_combinatorial_defect(&g, &m).unwrap() < 1e-12);
        assert!(m.bistochastic_defect() < 1e-12);
        let direct = eig_general(&m.matrix).unwrap().eigenvalues;
        let formula = m_sharp_spectrum_via_laplacian(&g).unwrap();
        assert!(multiset_distance(&direct, &formula) < 1e-8);
    }
}

#[test]
fn k4_second_modulus() {
    let m = build_m_sharp(&fixtures::complete(4)).unwrap();
    let report = mixing_gap(&m).unwrap();
    assert!((report.second_modulus - 0.5f64.sqrt()).abs() < 1e-8);
    assert!(!report.non_mixing);
    for p in &report.equilibrium {
        assert!((p - 1.0 / 12.0).abs() < 1e-10);
    }
}

#[test]
fn bipartite_map_is_non_mixing() {
    // −1 is an eigenvalue of M♯ on bipartite graphs
    let m = build_m_sharp(&fixtures::complete_bipartite(3, 3)).unwrap();
    assert!(mixing_gap(&m).unwrap().non_mixing);
}

#[test]
fn sharp_needs_regular_valency_above_two() {
    assert!(matches!(build_m_sharp(&fixtures::cycle(5)), Err(graph_zeta::Error::ValencyTooSmall(2))));
    assert!(matches!(build_m_sharp(&fixtures::weighted_paw()), Err(graph_zeta::Error::NotRegular)));
}

#[test]
fn bad_distributions_rejected() {
    let m = build_m(&fixtures::cycle(3), c(0.5, 0.0), LaplacianKind::Standard).unwrap();
    assert!(evolve(&m, &[0.5; 6], 1).is_err());
    assert!(evolve(&m, &[1.0, -0.2, 0.2, 0.0, 0.0, 0.0], 1).is_err());
    assert!(evolve(&m, &[0.5, 0.5], 1).is_err());
    assert!(build_m(&fixtures::cycle(3), c(0.5, 0.1), LaplacianKind::Standard).is_err());
}
