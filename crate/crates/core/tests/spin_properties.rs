use gqd::linalg::{hermitian_eig, trace_norm};
use gqd::spin::{
    ground_state, hamiltonian, sqrt_thermal_state, sqrt_thermal_state_verbatim, thermal_state, thermal_state_numeric,
    ModelParams,
};
use proptest::prelude::*;

fn couplings() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.0..5.0f64, 0.0..5.0f64, 0.0..5.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hamiltonian_spectrum((j, b, d) in couplings()) {
        let p = ModelParams::new(j, b, d, 1.0);
        let delta = p.delta();
        let mut expect = [2.0 * delta, -2.0 * delta, 2.0 * b, -2.0 * b];
        expect.sort_by(|x, y| y.total_cmp(x));
        let got = hermitian_eig(&hamiltonian(&p)).unwrap().values;
        for k in 0..4 {
            prop_assert!((got[k] - expect[k]).abs() <= 1e-10, "{got:?} vs {expect:?}");
        }
    }

    #[test]
    fn closed_form_gibbs_state_matches_numeric((j, b, d) in couplings(), t in 0.1..5.0f64) {
        let p = ModelParams::new(j, b, d, t);
        let closed = thermal_state(&p).unwrap();
        let numeric = thermal_state_numeric(&p).unwrap();
        prop_assert!(closed.matrix().max_abs_diff(numeric.matrix()) <= 1e-10);
    }

    #[test]
    fn sign_flips_act_on_matrix_entries((j, b, d) in couplings(), t in 0.1..5.0f64) {
        let rho = thermal_state(&ModelParams::new(j, b, d, t)).unwrap();
        let flip_d = thermal_state(&ModelParams::new(j, b, -d, t)).unwrap();
        prop_assert!((flip_d.entry(1, 2) - rho.entry(1, 2).conj()).norm() <= 1e-14);
        prop_assert!((flip_d.entry(0, 0) - rho.entry(0, 0)).norm() <= 1e-14);
        let flip_b = thermal_state(&ModelParams::new(j, -b, d, t)).unwrap();
        prop_assert!((flip_b.entry(0, 0) - rho.entry(3, 3)).norm() <= 1e-14);
        prop_assert!((flip_b.entry(3, 3) - rho.entry(0, 0)).norm() <= 1e-14);
        prop_assert!((flip_b.entry(1, 2) - rho.entry(1, 2)).norm() <= 1e-14);
    }

    #[test]
    fn square_root_is_normalised((j, b, d) in couplings(), t in 0.05..5.0f64) {
        let p = ModelParams::new(j, b, d, t);
        let r = sqrt_thermal_state(&p).unwrap();
        prop_assert!(((r * r).trace().re - 1.0).abs() <= 1e-12);
        prop_assert!((r * r).max_abs_diff(thermal_state(&p).unwrap().matrix()) <= 1e-12);
        // the doubled middle block overweights the coupled sector fourfold
        let v = sqrt_thermal_state_verbatim(&p).unwrap();
        let w = p.gibbs_weights().unwrap();
        prop_assert!(((v * v).trace().re - 1.0 - 3.0 * (w.psi1 + w.psi2)).abs() <= 1e-12);
    }

    #[test]
    fn low_temperature_approaches_ground_state((j, b, d) in couplings()) {
        let p = ModelParams::new(j, b, d, 1e-3);
        prop_assume!((p.delta() - b).abs() > 0.1);
        let diff = *thermal_state(&p).unwrap().matrix() - *ground_state(&p).matrix();
        prop_assert!(trace_norm(&diff).unwrap() <= 1e-2);
    }
}
