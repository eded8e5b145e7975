use serde::Serialize;

use super::trace::ground_value;
use super::{finish, Branch, Diagnostics, Measure, MeasureResult, Method};
use crate::density::DensityMatrix;
use crate::error::Result;
use crate::linalg::{hermitian_eig, kron, pauli, Mat3, C64};
use crate::spin::ModelParams;
use crate::tolerance::EPS_DEG;

/// `W_ij = Tr[√ρ (σ_i ⊗ I) √ρ (σ_j ⊗ I)]`, both Paulis on qubit A.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationMatrixW(pub [[f64; 3]; 3]);

impl CorrelationMatrixW {
    /// Eigenvalues (non-increasing) and the top eigenvector, made real.
    pub fn top(&self) -> Result<([f64; 3], [f64; 3])> {
        let eig = hermitian_eig(&Mat3::from_real_rows(self.0))?;
        let v = eig.vector(0);
        let pivot = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        let phase = pivot.conj() / pivot.norm();
        let axis = v.map(|z| (z * phase).re);
        Ok((eig.values, axis))
    }
}

pub fn correlation_matrix_w(rho: &DensityMatrix) -> Result<CorrelationMatrixW> {
    let root = rho.sqrt()?;
    let id = pauli::identity();
    let ops = pauli::all().map(|s| kron(&s, &id));
    let sandwiched = ops.map(|s| root * s);
    let mut w = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let t: C64 = (sandwiched[i] * sandwiched[j]).trace();
            w[i][j] = t.re;
            w[j][i] = t.re;
        }
    }
    Ok(CorrelationMatrixW(w))
}

/// `Q_H = 1 − λ_max(W)`.
pub fn hellinger_gqd(rho: &DensityMatrix) -> Result<MeasureResult> {
    let w = correlation_matrix_w(rho)?;
    let (values, axis) = w.top()?;
    let diag = Diagnostics { branch: Some(Branch::from_axis(axis)), argmax: Some(axis), ..Default::default() };
    finish(Measure::Hellinger, Method::Definitional, 1.0 - values[0], diag)
}

/// Transverse and longitudinal eigenvalues of `W` for the thermal state:
/// `λ₁ = 4 cosh βδ cosh βB / Z` (σx, σy) and `λ₂ = (2 + 2 cosh 2βB)/Z` (σz).
pub fn hellinger_eigenvalues(p: &ModelParams) -> Result<(f64, f64)> {
    let w = p.gibbs_weights()?;
    let lambda1 = (w.psi1.sqrt() + w.psi2.sqrt()) * (w.up.sqrt() + w.down.sqrt());
    let lambda2 = 2.0 * (w.psi1 * w.psi2).sqrt() + w.up + w.down;
    Ok((lambda1, lambda2))
}

/// Printed constants `λ₁ = 8 cosh βδ cosh βB / Z`, `λ₂ = (8 + 2 cosh 2βB)/Z`.
fn hellinger_eigenvalues_verbatim(p: &ModelParams) -> Result<(f64, f64)> {
    let w = p.gibbs_weights()?;
    let lambda1 = 2.0 * (w.psi1.sqrt() + w.psi2.sqrt()) * (w.up.sqrt() + w.down.sqrt());
    let lambda2 = 8.0 * (w.psi1 * w.psi2).sqrt() + w.up + w.down;
    Ok((lambda1, lambda2))
}

/// Closed form `Q_H = 1 − max{λ₁, λ₂}`; zero-temperature values as for the
/// trace discord.
pub fn hellinger_gqd_model(p: &ModelParams) -> Result<MeasureResult> {
    hellinger_gqd_model_with(p, false)
}

/// As [`hellinger_gqd_model`]; `verbatim` switches to the printed constants,
/// which do not vanish for the maximally mixed state.
pub fn hellinger_gqd_model_with(p: &ModelParams, verbatim: bool) -> Result<MeasureResult> {
    let method = if verbatim { Method::PaperVerbatim } else { Method::ClosedForm };
    if p.t == 0.0 {
        let (value, branch) = ground_value(p);
        let diag = Diagnostics { branch: Some(branch), ..Default::default() };
        return finish(Measure::Hellinger, method, value, diag);
    }
    let (l1, l2) = if verbatim { hellinger_eigenvalues_verbatim(p)? } else { hellinger_eigenvalues(p)? };
    // ties within round-off (the δ = |B| locus) count as transverse
    let branch = if l1 >= l2 - EPS_DEG * l1.max(l2) { Branch::Transverse } else { Branch::Longitudinal };
    let diag = Diagnostics { branch: Some(branch), ..Default::default() };
    finish(Measure::Hellinger, method, 1.0 - l1.max(l2), diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{ground_state, thermal_state};

    #[test]
    fn maximally_mixed_gives_identity_w() {
        let w = correlation_matrix_w(&DensityMatrix::maximally_mixed()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((w.0[i][j] - e).abs() < 1e-14);
            }
        }
        assert!(hellinger_gqd(&DensityMatrix::maximally_mixed()).unwrap().value < 1e-14);
    }

    #[test]
    fn thermal_w_is_diagonal() {
        let p = ModelParams::new(0.9, 1.1, 0.4, 0.6);
        let w = correlation_matrix_w(&thermal_state(&p).unwrap()).unwrap();
        let beta = 1.0 / p.t;
        let z = p.partition_function().unwrap();
        let wt = 4.0 * (beta * p.delta()).cosh() * (beta * p.b).cosh() / z;
        let wz = (2.0 + 2.0 * (2.0 * beta * p.b).cosh()) / z;
        let expect = [[wt, 0.0, 0.0], [0.0, wt, 0.0], [0.0, 0.0, wz]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((w.0[i][j] - expect[i][j]).abs() < 1e-12, "W[{i}][{j}]");
            }
        }
    }

    #[test]
    fn bell_state_is_maximal() {
        let bell = ground_state(&ModelParams::new(1.0, 0.0, 0.0, 0.0));
        let w = correlation_matrix_w(&bell).unwrap();
        assert!(w.0.iter().flatten().all(|x| x.abs() < 1e-14));
        assert!((hellinger_gqd(&bell).unwrap().value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reference_point() {
        let p = ModelParams::new(1.0, 0.0, 0.0, 1.0);
        let z = p.partition_function().unwrap();
        let expect = 1.0 - 4.0 * 1f64.cosh() / z;
        assert!((expect - 0.35194).abs() < 1e-5);
        assert!((hellinger_gqd_model(&p).unwrap().value - expect).abs() < 1e-14);
        assert!((hellinger_gqd(&thermal_state(&p).unwrap()).unwrap().value - expect).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_limit() {
        let p = ModelParams::new(1.2, 0.8, 2.0, 1e9);
        let (l1, l2) = hellinger_eigenvalues(&p).unwrap();
        assert!((l1 - 1.0).abs() < 1e-8 && (l2 - 1.0).abs() < 1e-8);
        assert!(hellinger_gqd_model(&p).unwrap().value < 1e-8);
        let v = hellinger_gqd_model_with(&p, true).unwrap();
        assert!((v.value + 1.5).abs() < 1e-8);
        assert_eq!(v.method, Method::PaperVerbatim);
    }

    #[test]
    fn degenerate_locus_ties_eigenvalues() {
        for t in [0.2, 0.5, 1.0, 3.0] {
            let p = ModelParams::new(1.0, 1.5, 5f64.sqrt() / 2.0, t);
            let (l1, l2) = hellinger_eigenvalues(&p).unwrap();
            assert!((l1 - l2).abs() < 1e-14);
        }
    }

    #[test]
    fn branch_follows_delta_minus_b() {
        let below = hellinger_gqd_model(&ModelParams::new(1.0, 3.0, 1.0, 0.5)).unwrap();
        assert_eq!(below.branch(), Some(Branch::Longitudinal));
        let above = hellinger_gqd_model(&ModelParams::new(1.0, 1.0, 2.0, 0.5)).unwrap();
        assert_eq!(above.branch(), Some(Branch::Transverse));
        let def = hellinger_gqd(&thermal_state(&ModelParams::new(1.0, 3.0, 1.0, 0.5)).unwrap()).unwrap();
        assert_eq!(def.branch(), Some(Branch::Longitudinal));
    }
}
