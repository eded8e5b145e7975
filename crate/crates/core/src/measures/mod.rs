//! The three geometric discords of a two-qubit state, each measured with
//! respect to projective measurements on qubit A.
//!
//! Every measure has a definitional path taking a [`DensityMatrix`] and, for
//! the trace and Hellinger discords, a closed-form path taking
//! [`ModelParams`](crate::spin::ModelParams) for the thermal XX+DM state.

mod bures;
mod hellinger;
mod trace;

use std::fmt;

use serde::Serialize;

pub use bures::{bures_from_fidelity, bures_gqd, bures_gqd_with, bures_maximand, uhlmann_fidelity, BuresOptions};
pub use hellinger::{
    correlation_matrix_w, hellinger_eigenvalues, hellinger_gqd, hellinger_gqd_model, hellinger_gqd_model_with,
    CorrelationMatrixW,
};
pub use trace::{trace_gqd_complement, trace_gqd_delta_derivative, trace_gqd_model, trace_gqd_xstate, x_state_params, XStateParams};

use crate::error::{Error, Result};
use crate::tolerance::CLAMP_LIMIT;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Trace,
    Hellinger,
    Bures,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Trace, Measure::Hellinger, Measure::Bures];

    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Trace => "trace",
            Measure::Hellinger => "hellinger",
            Measure::Bures => "bures",
        }
    }

    /// CSV column name.
    pub fn column(&self) -> &'static str {
        match self {
            Measure::Trace => "Q_T",
            Measure::Hellinger => "Q_H",
            Measure::Bures => "Q_B",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Definitional,
    Oracle,
    /// Closed form with the uncorrected square-root constants. Not a valid
    /// discord; excluded from every invariant check.
    PaperVerbatim,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Definitional => "definitional",
            Method::Oracle => "oracle",
            Method::PaperVerbatim => "paper_verbatim",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which internal branch produced the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// X-state formula evaluated as a ratio.
    Regular,
    /// X-state formula with a vanishing denominator (returns `γ₁`).
    DegenerateDenominator,
    /// Optimal measurement axis closer to z.
    Longitudinal,
    /// Optimal measurement axis closer to the xy plane.
    Transverse,
    /// Zero temperature, field-aligned ground state.
    GroundFieldAligned,
    /// Zero temperature, coupled ground state.
    GroundCoupled,
    /// Zero temperature, degenerate ground state.
    GroundDegenerate,
}

impl Branch {
    /// Axis-type branch from a measurement direction.
    pub fn from_axis(u: [f64; 3]) -> Branch {
        if u[2] * u[2] >= 0.5 {
            Branch::Longitudinal
        } else {
            Branch::Transverse
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    /// Optimal measurement axis on qubit A, when one is computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<usize>,
    /// Refinement rounds (step halvings) of the local search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    /// Value before clamping to `[0, 1]`.
    pub raw_value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureResult {
    pub value: f64,
    pub measure: Measure,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl MeasureResult {
    pub fn branch(&self) -> Option<Branch> {
        self.diagnostics.branch
    }
}

/// Range check and clamp. Excursions beyond [`CLAMP_LIMIT`] are errors;
/// `PaperVerbatim` values are passed through untouched.
pub(crate) fn finish(measure: Measure, method: Method, raw: f64, mut diagnostics: Diagnostics) -> Result<MeasureResult> {
    diagnostics.raw_value = raw;
    if method == Method::PaperVerbatim {
        return Ok(MeasureResult { value: raw, measure, method, diagnostics });
    }
    if !raw.is_finite() || raw < -CLAMP_LIMIT || raw > 1.0 + CLAMP_LIMIT {
        return Err(Error::ValueOutOfRange { measure: measure.as_str(), value: raw });
    }
    Ok(MeasureResult { value: raw.clamp(0.0, 1.0), measure, method, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finish_clamps_small_excursions() {
        let r = finish(Measure::Trace, Method::ClosedForm, -1e-12, Diagnostics::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.diagnostics.raw_value, -1e-12);
        let r = finish(Measure::Trace, Method::ClosedForm, 1.0 + 1e-10, Diagnostics::default()).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn finish_rejects_large_excursions() {
        assert!(finish(Measure::Hellinger, Method::Definitional, -1e-6, Diagnostics::default()).is_err());
        assert!(finish(Measure::Hellinger, Method::Definitional, f64::NAN, Diagnostics::default()).is_err());
    }

    #[test]
    fn verbatim_is_not_clamped() {
        let r = finish(Measure::Hellinger, Method::PaperVerbatim, -1.5, Diagnostics::default()).unwrap();
        assert_eq!(r.value, -1.5);
    }
}
