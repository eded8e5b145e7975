use gqd::linalg::{hermitian_eig, kron, matrix_sqrt_psd, trace_norm, Mat2, Mat4, C64};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, phi)| C64::from_polar(r, phi))
}

fn matrix4() -> impl Strategy<Value = Mat4> {
    proptest::array::uniform4(proptest::array::uniform4(complex())).prop_map(Mat4::from_rows)
}

fn matrix2() -> impl Strategy<Value = Mat2> {
    proptest::array::uniform2(proptest::array::uniform2(complex())).prop_map(Mat2::from_rows)
}

/// Hermitian with entry moduli at most one.
fn hermitian4() -> impl Strategy<Value = Mat4> {
    matrix4().prop_map(|m| (m + m.adjoint()).scale(0.5))
}

fn phases() -> impl Strategy<Value = Mat4> {
    proptest::array::uniform4(0.0..std::f64::consts::TAU).prop_map(|p| {
        let mut u = Mat4::zeros();
        for (k, phi) in p.iter().enumerate() {
            u[(k, k)] = C64::from_polar(1.0, *phi);
        }
        u
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigendecomposition_reconstructs(h in hermitian4()) {
        let eig = hermitian_eig(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) <= 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let gram = eig.vectors.adjoint() * eig.vectors;
        prop_assert!(gram.max_abs_diff(&Mat4::identity()) <= 1e-10);
    }

    #[test]
    fn psd_square_root_squares_back(a in matrix4()) {
        let m = a.adjoint() * a;
        let tr = m.trace().re;
        prop_assume!(tr > 1e-6);
        let m = m.scale(1.0 / tr);
        let r = matrix_sqrt_psd(&m).unwrap();
        prop_assert!((r * r).max_abs_diff(&m) <= 1e-10);
        prop_assert!(r.is_hermitian(1e-12));
    }

    #[test]
    fn trace_norm_triangle_inequality(a in matrix4(), b in matrix4(), c in matrix4()) {
        let ab = trace_norm(&(a - b)).unwrap();
        let bc = trace_norm(&(b - c)).unwrap();
        let ac = trace_norm(&(a - c)).unwrap();
        prop_assert!(ac <= ab + bc + 1e-10);
    }

    #[test]
    fn trace_norm_unitary_invariance(m in matrix4(), u in phases(), v in phases()) {
        let a = trace_norm(&m).unwrap();
        let b = trace_norm(&(u * m * v)).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn kron_is_bilinear(a in matrix2(), b in matrix2(), c in matrix2()) {
        let lhs = kron(&(a + b), &c);
        let rhs = kron(&a, &c) + kron(&b, &c);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-14);
        let lhs = kron(&c, &(a + b));
        let rhs = kron(&c, &a) + kron(&c, &b);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-14);
    }
}
