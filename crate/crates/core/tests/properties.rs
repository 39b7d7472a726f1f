mod common;

use common::{random_density, rng, temp};
use ness_core::liouville::{build_effective_hamiltonian, build_superoperator};
use ness_core::numkernel::{hermitian_matrix_function, kron, psd_matrix_function};
use ness_core::sweep::format_number;
use ness_core::thermo::trace_distance;
use ness_core::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |v| {
        ComplexMatrix::from_fn(n, n, |i, j| C64::new(v[2 * (i * n + j)], v[2 * (i * n + j) + 1]))
    })
}

fn density(n: usize) -> impl Strategy<Value = DensityMatrix> {
    (matrix(n), 0.0f64..1.0).prop_map(|(g, mix)| {
        // Blend with I/n so both near-pure and near-mixed states occur.
        let m = g.matmul(&g.adjoint());
        let tr = m.trace().re.max(1e-12);
        let blended = &m.scale_real((1.0 - mix) / tr) + &ComplexMatrix::identity(m.rows()).scale_real(mix / m.rows() as f64);
        DensityMatrix::from_approximate(&blended).unwrap()
    })
}

fn two_level() -> impl Strategy<Value = TwoLevelParams> {
    (0.1f64..5.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..20.0, 0.0f64..20.0).prop_map(|(omega, gamma, big_gamma, t1, t2)| {
        TwoLevelParams { omega, gamma, big_gamma, t1: temp(t1), t2: temp(t2) }
    })
}

fn coupled() -> impl Strategy<Value = CoupledQubitsParams> {
    (0.2f64..3.0, 0.2f64..3.0, -1.0f64..1.0, 0.01f64..1.0, 0.0f64..1.0, 0.0f64..10.0, 0.0f64..10.0).prop_map(
        |(omega1, omega2, j, gamma, big_gamma, t1, t2)| CoupledQubitsParams {
            omega1,
            omega2,
            j,
            gamma,
            big_gamma,
            t1: temp(t1),
            t2: temp(t2),
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(3), c in matrix(2), d in matrix(3)) {
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn exp_of_log_is_identity(rho in density(4)) {
        // Shift away from zero so the logarithm is well conditioned.
        let a = &rho.matrix().clone() + &ComplexMatrix::identity(4).scale_real(0.1);
        let log = psd_matrix_function(&a, f64::ln).unwrap();
        let back = hermitian_matrix_function(&log, f64::exp).unwrap();
        prop_assert!(back.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(a in density(3), b in density(3)) {
        let ab = uhlmann_fidelity(&a, &b).unwrap();
        let ba = uhlmann_fidelity(&b, &a).unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&ab));
        prop_assert!((ab - ba).abs() <= 1e-9);
        // Fuchs–van de Graaf: 1 − F ≤ D ≤ √(1 − F²).
        let d = trace_distance(&a, &b).unwrap();
        prop_assert!(1.0 - ab <= d + 1e-9);
        prop_assert!(d <= (1.0 - ab * ab).max(0.0).sqrt() + 1e-7);
    }

    #[test]
    fn entropy_is_bounded(rho in density(5)) {
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= 0.0 && s <= 5f64.ln());
    }

    #[test]
    fn effective_hamiltonian_is_i_times_liouvillian(p in two_level(), q in coupled()) {
        for model in [make_two_level(&p).unwrap(), make_coupled_qubits(&q).unwrap()] {
            let lv = build_superoperator(&model).matrix().to_dense();
            let heff = build_effective_hamiltonian(&model).matrix().to_dense();
            let diff = &heff - &lv.scale(C64::new(0.0, 1.0));
            prop_assert!(diff.norm_inf() <= 1e-12);
        }
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity(q in coupled(), seed in any::<u64>()) {
        let model = make_coupled_qubits(&q).unwrap();
        let lv = build_superoperator(&model);
        prop_assert!(lv.trace_row_sum().iter().all(|z| z.norm() <= 1e-12));
        let rho = random_density(&mut rng(seed), 4);
        let d = lv.apply_matrix(rho.matrix()).unwrap();
        prop_assert!(d.trace().norm() <= 1e-12);
        prop_assert!(d.hermitian_defect() <= 1e-12);
    }

    #[test]
    fn two_level_solver_matches_closed_form(p in two_level()) {
        prop_assume!(p.gamma + p.big_gamma > 1e-3);
        let rho = solve_steady_state(&make_two_level(&p).unwrap()).unwrap();
        let exact = two_level_closed_form(&p).unwrap();
        prop_assert!(rho.matrix().max_abs_diff(exact.matrix()) <= 1e-10);
    }

    #[test]
    fn steady_states_are_valid(q in coupled()) {
        prop_assume!(q.big_gamma > 1e-3 || q.j.abs() > 1e-2);
        let model = make_coupled_qubits(&q).unwrap();
        let rho = solve_steady_state(&model).unwrap();
        prop_assert!((rho.matrix().trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(rho.matrix().hermitian_defect() == 0.0);
        prop_assert!(rho.populations().iter().all(|&p| p >= -1e-12));
        let residual = build_superoperator(&model).apply_matrix(rho.matrix()).unwrap().max_abs();
        prop_assert!(residual <= 1e-9 * build_superoperator(&model).matrix().norm_inf());
    }

    #[test]
    fn occupation_increases_with_temperature(omega in 0.1f64..5.0, t in 0.01f64..50.0, dt in 0.001f64..10.0) {
        let lo = mean_occupation(temp(t), omega).unwrap();
        let hi = mean_occupation(temp(t + dt), omega).unwrap();
        prop_assert!(lo >= 0.0 && hi >= lo);
    }

    #[test]
    fn gibbs_populations_follow_boltzmann(q in coupled()) {
        let h = q.hamiltonian();
        let g = gibbs_state(&h, q.t1).unwrap();
        let levels = eigenbasis_populations(&g, &h).unwrap();
        let t = q.t1.value();
        let e0 = levels[0].energy;
        let z: f64 = levels.iter().map(|l| if t > 0.0 { (-(l.energy - e0) / t).exp() } else { f64::from(l.energy - e0 <= 1e-10) }).sum();
        for l in &levels {
            let w = if t > 0.0 { (-(l.energy - e0) / t).exp() } else { f64::from(l.energy - e0 <= 1e-10) };
            prop_assert!((l.population - w / z).abs() < 1e-10);
        }
    }

    #[test]
    fn number_format_round_trips(x in prop::num::f64::NORMAL) {
        let s = format_number(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-12 * x.abs(), "{} -> {}", x, s);
        prop_assert!(!s.contains(','));
    }
}

#[test]
fn entropy_of_pure_and_maximally_mixed_states() {
    let mut r = rng(1);
    for n in 2..=8 {
        let psi: Vec<C64> = {
            let g = common::random_matrix(&mut r, n, 1);
            let norm = g.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            g.as_slice().iter().map(|z| z / norm).collect()
        };
        assert_eq!(von_neumann_entropy(&DensityMatrix::pure(&psi).unwrap()).unwrap(), 0.0);
        assert_eq!(von_neumann_entropy(&DensityMatrix::maximally_mixed(n)).unwrap(), (n as f64).ln());
    }
}

#[test]
fn fidelity_on_random_pairs() {
    let mut r = rng(42);
    for k in 0..100 {
        let n = 2 + k % 5;
        let a = random_density(&mut r, n);
        let b = random_density(&mut r, n);
        let ab = uhlmann_fidelity(&a, &b).unwrap();
        let ba = uhlmann_fidelity(&b, &a).unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&ab));
        assert!((ab - ba).abs() <= 1e-9);
        assert!((uhlmann_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }
}
