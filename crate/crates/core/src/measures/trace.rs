use serde::Serialize;

use super::{finish, Branch, Diagnostics, Measure, MeasureResult, Method};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::spin::{ground_case, GroundCase, ModelParams};
use crate::tolerance::{EPS_DEN, X_FORM_TOL};

/// Parameters of a two-qubit X state:
/// `γ₁,₂ = 2(|ρ₂₃| ± |ρ₁₄|)`, `γ₃ = 1 − 2(ρ₂₂ + ρ₃₃)`, `x₃ = 2(ρ₁₁ + ρ₂₂) − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XStateParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub x3: f64,
}

/// Entries that must vanish for an X state, as `(row, col)`.
const NON_X: [(usize, usize); 8] = [(0, 1), (0, 2), (1, 0), (2, 0), (1, 3), (3, 1), (2, 3), (3, 2)];

pub fn x_state_params(rho: &DensityMatrix) -> Result<XStateParams> {
    let worst = NON_X.iter().map(|&(i, j)| rho.entry(i, j).norm()).fold(0.0, f64::max);
    if worst > X_FORM_TOL {
        return Err(Error::NotXState { max_entry: worst });
    }
    let r = |i: usize, j: usize| rho.entry(i, j);
    let c23 = r(1, 2).norm();
    let c14 = r(0, 3).norm();
    Ok(XStateParams {
        gamma1: 2.0 * (c23 + c14),
        gamma2: 2.0 * (c23 - c14),
        gamma3: 1.0 - 2.0 * (r(1, 1).re + r(2, 2).re),
        x3: 2.0 * (r(0, 0).re + r(1, 1).re) - 1.0,
    })
}

impl XStateParams {
    /// Trace-distance discord of the X state.
    ///
    /// The denominator vanishes only when `γ₁ = γ₂` and the max/min terms
    /// coincide; the ratio then tends to `γ₁²`, so `γ₁` is returned.
    pub fn trace_discord(&self) -> (f64, Branch) {
        let g1 = self.gamma1 * self.gamma1;
        let g2 = self.gamma2 * self.gamma2;
        let g3 = self.gamma3 * self.gamma3;
        let x3 = self.x3 * self.x3;
        let hi = g3.max(g2 + x3);
        let lo = g1.min(g3);
        let den = hi - lo + g1 - g2;
        if den < EPS_DEN {
            return (self.gamma1, Branch::DegenerateDenominator);
        }
        // (g1·hi − g2·lo)/den as a weighted mean of g1 and lo, which avoids
        // cancellation when den is small
        let (a, b) = ((hi - lo).max(0.0), (g1 - g2).max(0.0));
        let ratio = if a + b > 0.0 { (g1 * a + lo * b) / (a + b) } else { g1 };
        (ratio.max(0.0).sqrt(), Branch::Regular)
    }
}

/// Trace-distance discord of an X state via its `γ`/`x₃` parameters.
pub fn trace_gqd_xstate(rho: &DensityMatrix) -> Result<MeasureResult> {
    let params = x_state_params(rho)?;
    let (value, branch) = params.trace_discord();
    let diag = Diagnostics { branch: Some(branch), ..Default::default() };
    finish(Measure::Trace, Method::Definitional, value, diag)
}

/// Closed form for the thermal state, `Q_T = 2 sinh(2βδ)/Z`. At `T = 0`
/// the zero-temperature values `1`, `0`, `1/2` are returned for `δ > |B|`,
/// `δ < |B|` and `δ = |B|`.
pub fn trace_gqd_model(p: &ModelParams) -> Result<MeasureResult> {
    if p.t == 0.0 {
        let (value, branch) = ground_value(p);
        let diag = Diagnostics { branch: Some(branch), ..Default::default() };
        return finish(Measure::Trace, Method::ClosedForm, value, diag);
    }
    let w = p.gibbs_weights()?;
    finish(Measure::Trace, Method::ClosedForm, w.coherence(), Diagnostics::default())
}

/// `1 − Q_T` for the thermal state, computed without cancellation:
/// `(2e^{-2βδ} + 2 cosh 2βB)/Z`.
pub fn trace_gqd_complement(p: &ModelParams) -> Result<f64> {
    let w = p.gibbs_weights()?;
    Ok(2.0 * w.psi1 + w.up + w.down)
}

/// `∂Q_T/∂δ = 8β(1 + cosh 2βδ · cosh 2βB)/Z²`.
pub fn trace_gqd_delta_derivative(p: &ModelParams) -> Result<f64> {
    let beta = p.beta().ok_or(Error::NonPositiveTemperature { t: p.t })?;
    let w = p.gibbs_weights()?;
    // 1/Z² = w₁w₂, cosh 2βδ/Z = (w₁+w₂)/2, cosh 2βB/Z = (w₃+w₄)/2
    Ok(8.0 * beta * (w.psi1 * w.psi2 + 0.25 * (w.psi1 + w.psi2) * (w.up + w.down)))
}

pub(super) fn ground_value(p: &ModelParams) -> (f64, Branch) {
    match ground_case(p) {
        GroundCase::Coupled => (1.0, Branch::GroundCoupled),
        GroundCase::FieldAligned => (0.0, Branch::GroundFieldAligned),
        GroundCase::Degenerate => (0.5, Branch::GroundDegenerate),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Mat4, C64};
    use crate::spin::{ground_state, thermal_state};

    #[test]
    fn maximally_mixed_params() {
        let p = x_state_params(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(p, XStateParams { gamma1: 0.0, gamma2: 0.0, gamma3: 0.0, x3: 0.0 });
        assert_eq!(trace_gqd_xstate(&DensityMatrix::maximally_mixed()).unwrap().value, 0.0);
    }

    #[test]
    fn bell_params_and_value() {
        let bell = ground_state(&ModelParams::new(1.0, 0.0, 0.0, 0.0));
        let p = x_state_params(&bell).unwrap();
        assert!((p.gamma1 - 1.0).abs() < 1e-15 && (p.gamma2 - 1.0).abs() < 1e-15);
        assert!((p.gamma3 + 1.0).abs() < 1e-15 && p.x3.abs() < 1e-15);
        let r = trace_gqd_xstate(&bell).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert_eq!(r.branch(), Some(Branch::DegenerateDenominator));
    }

    #[test]
    fn thermal_params_match_closed_form() {
        let m = ModelParams::new(0.7, 0.9, 1.3, 0.8);
        let beta = 1.0 / m.t;
        let (delta, b) = (m.delta(), m.b);
        let z = m.partition_function().unwrap();
        let p = x_state_params(&thermal_state(&m).unwrap()).unwrap();
        let g = 2.0 * (2.0 * beta * delta).sinh() / z;
        assert!((p.gamma1 - g).abs() < 1e-14 && (p.gamma2 - g).abs() < 1e-14);
        let g3 = (2.0 * (2.0 * beta * b).cosh() - 2.0 * (2.0 * beta * delta).cosh()) / z;
        assert!((p.gamma3 - g3).abs() < 1e-14);
        assert!((p.x3 + 2.0 * (2.0 * beta * b).sinh() / z).abs() < 1e-14);
    }

    #[test]
    fn reference_point() {
        let m = ModelParams::new(1.0, 0.0, 0.0, 1.0);
        let expect = 2.0 * 2f64.sinh() / (2.0 * 2f64.cosh() + 2.0);
        assert!((expect - 0.76160).abs() < 1e-5);
        let a = trace_gqd_model(&m).unwrap().value;
        let b = trace_gqd_xstate(&thermal_state(&m).unwrap()).unwrap().value;
        assert!((a - expect).abs() < 1e-14);
        assert!((b - expect).abs() < 1e-14);
    }

    #[test]
    fn high_temperature_and_strong_dm() {
        assert!(trace_gqd_model(&ModelParams::new(1.0, 1.0, 1.0, 1e9)).unwrap().value < 1e-8);
        assert!(trace_gqd_model(&ModelParams::new(1.0, 1.0, 50.0, 0.5)).unwrap().value > 0.999);
    }

    #[test]
    fn rejects_non_x_state() {
        let mut m = Mat4::identity().scale(0.25);
        m[(0, 1)] = C64::new(0.1, 0.0);
        m[(1, 0)] = C64::new(0.1, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(matches!(trace_gqd_xstate(&rho), Err(Error::NotXState { .. })));
    }

    #[test]
    fn zero_temperature_cases() {
        let cases = [((1.0, 1.0, 2.0), 1.0), ((1.0, 3.0, 1.0), 0.0), ((1.0, 1.5, 5f64.sqrt() / 2.0), 0.5)];
        for ((j, b, d), expect) in cases {
            let p = ModelParams::new(j, b, d, 0.0);
            assert_eq!(trace_gqd_model(&p).unwrap().value, expect);
            let def = trace_gqd_xstate(&ground_state(&p)).unwrap().value;
            assert!((def - expect).abs() < 1e-12, "{def} vs {expect}");
        }
    }

    #[test]
    fn complement_and_derivative() {
        let p = ModelParams::new(0.6, 1.4, 0.9, 0.7);
        let q = trace_gqd_model(&p).unwrap().value;
        assert!((q + trace_gqd_complement(&p).unwrap() - 1.0).abs() < 1e-15);
        let beta = 1.0 / p.t;
        let z = p.partition_function().unwrap();
        let expect = 8.0 * beta / (z * z) * (1.0 + (2.0 * beta * p.delta()).cosh() * (2.0 * beta * p.b).cosh());
        assert!((trace_gqd_delta_derivative(&p).unwrap() - expect).abs() < 1e-14);
    }
}
