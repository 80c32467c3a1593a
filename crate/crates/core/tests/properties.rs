mod common;

use ancilla_core::dynamics::{evolve, evolve_with, TimeGrid};
use ancilla_core::linalg::{
    kron, matrix_exp_hermitian, matrix_log, partial_trace, relative_entropy, trace_norm, Superoperator,
};
use ancilla_core::model::{apply_lindbladian, hamiltonian_total, liouvillian_matrix};
use ancilla_core::nonmarkov::trace_distance;
use ancilla_core::ode::Tolerances;
use ancilla_core::thermo::decomposition_check;
use ancilla_core::{Subsystem, C64};
use common::{arb_hermitian, arb_params, arb_state};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relative_entropy_is_nonnegative(a in arb_state(4), b in arb_state(4)) {
        let r = relative_entropy(&a, &b).unwrap();
        prop_assert!(r >= -1e-12);
        prop_assert!(relative_entropy(&a, &a).unwrap().abs() < 1e-10);
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity(rho in arb_state(4)) {
        for keep in [Subsystem::S, Subsystem::A] {
            let r = partial_trace(&rho, keep);
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(r.eigenvalues_hermitian()[0] > -1e-12);
        }
    }

    #[test]
    fn kron_trace_factorises(a in arb_hermitian(2), b in arb_hermitian(2)) {
        let t = kron(&a, &b).trace();
        prop_assert!((t - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn trace_norm_triangle(a in arb_hermitian(4), b in arb_hermitian(4)) {
        let lhs = trace_norm(&(&a + &b)).unwrap();
        prop_assert!(lhs <= trace_norm(&a).unwrap() + trace_norm(&b).unwrap() + 1e-12);
    }

    #[test]
    fn log_exp_roundtrip(rho in arb_state(4)) {
        let back = matrix_exp_hermitian(&matrix_log(&rho));
        prop_assert!((&back - rho.as_operator()).max_abs() < 1e-10);
    }

    #[test]
    fn liouvillian_matrix_matches_direct_application(p in arb_params(), rho in arb_state(4)) {
        let l = liouvillian_matrix(&p);
        let direct = apply_lindbladian(&p, &rho);
        prop_assert!((&l.apply(&rho) - &direct).max_abs() < 1e-12);
        prop_assert!(direct.trace().norm() < 1e-12);
        prop_assert!(direct.hermiticity_error() < 1e-12);
        prop_assert!(l.trace_defect() < 1e-12);
    }

    #[test]
    fn decomposition_identity_holds(rho in arb_state(4), tau in arb_state(2), w in arb_state(2)) {
        prop_assert!(decomposition_check(&rho, &tau, &w).unwrap() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn relative_entropy_contracts_under_evolution(p in arb_params(), a in arb_state(4), b in arb_state(4)) {
        let grid = TimeGrid::uniform(1.5, 3).unwrap();
        let ta = evolve(&p, &a, &grid).unwrap();
        let tb = evolve(&p, &b, &grid).unwrap();
        let mut prev = relative_entropy(&a, &b).unwrap();
        for (x, y) in ta.states.iter().zip(&tb.states).skip(1) {
            let r = relative_entropy(x, y).unwrap();
            prop_assert!(r <= prev + 1e-7);
            prev = r;
        }
    }

    #[test]
    fn trace_distance_invariant_under_unitary_part(p in arb_params(), a in arb_state(4), b in arb_state(4)) {
        let h = hamiltonian_total(&p);
        let unitary = Superoperator::from_fn(4, |x| h.commutator(x).scale(C64::new(0.0, -1.0))).unwrap();
        let grid = TimeGrid::uniform(2.0, 4).unwrap();
        let tol = Tolerances::default();
        let ta = evolve_with(&unitary, &a, &grid, &tol).unwrap();
        let tb = evolve_with(&unitary, &b, &grid, &tol).unwrap();
        let d0 = trace_distance(&a, &b).unwrap();
        for (x, y) in ta.states.iter().zip(&tb.states) {
            prop_assert!((trace_distance(x, y).unwrap() - d0).abs() < 1e-8);
        }
    }

    #[test]
    fn trajectories_stay_physical(p in arb_params(), rho in arb_state(4)) {
        let traj = evolve(&p, &rho, &TimeGrid::uniform(3.0, 30).unwrap()).unwrap();
        for s in &traj.states {
            prop_assert!((s.trace().re - 1.0).abs() <= 1e-9);
            prop_assert!(s.eigenvalues_hermitian()[0] >= -1e-8);
        }
    }
}
