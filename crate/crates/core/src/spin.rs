//! Two-spin Heisenberg XX chain with a z-axis Dzyaloshinsky-Moriya term in a
//! uniform z field:
//!
//! `H = J(σx⊗σx + σy⊗σy) + B(σz⊗I + I⊗σz) + D(σx⊗σy − σy⊗σx)`
//!
//! Units: `ħ = k_B = 1`, so `T` is an energy and `β = 1/T`.
//!
//! The closed-form thermal state and its square root are evaluated from
//! normalised Boltzmann weights rather than raw `cosh`/`sinh` so that very low
//! temperatures do not overflow.

use serde::Serialize;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, matrix_exp_hermitian, pauli, Mat4, C64, ONE, ZERO};
use crate::tolerance::EPS_DEG;

/// Physical knobs of the model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    /// XX coupling.
    pub j: f64,
    /// Magnetic field along z.
    pub b: f64,
    /// DM interaction strength along z.
    pub d: f64,
    /// Temperature in units of `k_B`.
    pub t: f64,
}

impl ModelParams {
    pub fn new(j: f64, b: f64, d: f64, t: f64) -> Self {
        Self { j, b, d, t }
    }

    /// Parameters with a prescribed `δ` and `θ`: `J = δ cos θ`, `D = δ sin θ`.
    pub fn from_polar(delta: f64, theta: f64, b: f64, t: f64) -> Self {
        Self::new(delta * theta.cos(), b, delta * theta.sin(), t)
    }

    pub fn with_t(self, t: f64) -> Self {
        Self { t, ..self }
    }

    /// `δ = √(J² + D²)`.
    pub fn delta(&self) -> f64 {
        self.j.hypot(self.d)
    }

    /// `θ = atan2(D, J)`, with `θ = 0` when `J = D = 0`.
    pub fn theta(&self) -> f64 {
        if self.j == 0.0 && self.d == 0.0 {
            0.0
        } else {
            self.d.atan2(self.j)
        }
    }

    /// `β = 1/T`, or `None` at (or below) zero temperature.
    pub fn beta(&self) -> Option<f64> {
        (self.t > 0.0).then(|| 1.0 / self.t)
    }

    fn require_beta(&self) -> Result<f64> {
        self.beta().ok_or(Error::NonPositiveTemperature { t: self.t })
    }

    /// `Z = 2(cosh 2βδ + cosh 2βB)`. Overflows to `inf` for very small `T`;
    /// use [`GibbsWeights`] for anything numerical.
    pub fn partition_function(&self) -> Result<f64> {
        let beta = self.require_beta()?;
        Ok(2.0 * ((2.0 * beta * self.delta()).cosh() + (2.0 * beta * self.b).cosh()))
    }

    /// Boltzmann populations of the four eigenstates.
    pub fn gibbs_weights(&self) -> Result<GibbsWeights> {
        let beta = self.require_beta()?;
        Ok(GibbsWeights::new(beta, self.delta(), self.b))
    }

    /// Unit phase `e^{iθ}`.
    pub fn phase(&self) -> C64 {
        C64::from_polar(1.0, self.theta())
    }
}

/// `p_k = e^{-βε_k}/Z` for `ε = (+2δ, −2δ, +2B, −2B)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GibbsWeights {
    pub psi1: f64,
    pub psi2: f64,
    pub up: f64,
    pub down: f64,
}

impl GibbsWeights {
    fn new(beta: f64, delta: f64, b: f64) -> Self {
        let shift = 2.0 * beta * delta.max(b.abs());
        let e = |energy: f64| (-beta * energy - shift).exp();
        let raw = [e(2.0 * delta), e(-2.0 * delta), e(2.0 * b), e(-2.0 * b)];
        let z: f64 = raw.iter().sum();
        Self { psi1: raw[0] / z, psi2: raw[1] / z, up: raw[2] / z, down: raw[3] / z }
    }

    /// `2 sinh(2βδ)/Z`.
    pub fn coherence(&self) -> f64 {
        self.psi2 - self.psi1
    }
}

/// Exact spectrum: energies `(+2δ, −2δ, +2B, −2B)` with eigenvectors
/// `|Ψ₁,₂⟩ = (|10⟩ ± e^{iθ}|01⟩)/√2`, `|Ψ₃⟩ = |00⟩`, `|Ψ₄⟩ = |11⟩`.
#[derive(Clone, Copy, Debug)]
pub struct Spectrum {
    pub energies: [f64; 4],
    pub states: [[C64; 4]; 4],
    /// `J = D = 0`: the phase `θ` is undefined and was set to zero.
    pub theta_defaulted: bool,
}

/// The Hamiltonian assembled from its Pauli terms.
pub fn hamiltonian(p: &ModelParams) -> Mat4 {
    let [sx, sy, sz] = pauli::all();
    let id = pauli::identity();
    let xx_yy = kron(&sx, &sx) + kron(&sy, &sy);
    let field = kron(&sz, &id) + kron(&id, &sz);
    let dm = kron(&sx, &sy) - kron(&sy, &sx);
    xx_yy.scale(p.j) + field.scale(p.b) + dm.scale(p.d)
}

pub fn spectrum(p: &ModelParams) -> Spectrum {
    let delta = p.delta();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let ph = p.phase() * s;
    let half = C64::new(s, 0.0);
    Spectrum {
        energies: [2.0 * delta, -2.0 * delta, 2.0 * p.b, -2.0 * p.b],
        states: [
            [ZERO, ph, half, ZERO],
            [ZERO, -ph, half, ZERO],
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, ZERO, ZERO, ONE],
        ],
        theta_defaulted: p.j == 0.0 && p.d == 0.0,
    }
}

/// Closed-form Gibbs state:
///
/// ```text
///        ⎛ e^{-2βB}   0                   0                  0       ⎞
/// ρ = 1/Z⎜ 0          cosh 2βδ           -e^{iθ} sinh 2βδ    0       ⎟
///        ⎜ 0          -e^{-iθ} sinh 2βδ   cosh 2βδ           0       ⎟
///        ⎝ 0          0                   0                  e^{2βB} ⎠
/// ```
pub fn thermal_state(p: &ModelParams) -> Result<DensityMatrix> {
    let w = p.gibbs_weights()?;
    let mut m = Mat4::zeros();
    let mid = 0.5 * (w.psi1 + w.psi2);
    let off = p.phase() * (-0.5 * w.coherence());
    m[(0, 0)] = C64::new(w.up, 0.0);
    m[(1, 1)] = C64::new(mid, 0.0);
    m[(2, 2)] = C64::new(mid, 0.0);
    m[(1, 2)] = off;
    m[(2, 1)] = off.conj();
    m[(3, 3)] = C64::new(w.down, 0.0);
    let weights = [w.psi1, w.psi2, w.up, w.down];
    Ok(DensityMatrix::with_known_spectrum(m, weights, spectrum(p).states))
}

/// `exp(−βH)/Tr exp(−βH)` through the eigendecomposition of the assembled
/// Hamiltonian. The ground energy is subtracted before exponentiating.
pub fn thermal_state_numeric(p: &ModelParams) -> Result<DensityMatrix> {
    let beta = p.require_beta()?;
    let h = hamiltonian(p);
    let ground = hermitian_eig(&h)?.values[3];
    let shifted = h - Mat4::identity().scale(ground);
    let e = matrix_exp_hermitian(&shifted, -beta)?;
    let tr = e.trace().re;
    DensityMatrix::new(e.scale(1.0 / tr).hermitian_part())
}

/// Which eigenstate(s) the zero-temperature state is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundCase {
    /// `δ > |B|`: the singlet-like `|Ψ₂⟩`.
    Coupled,
    /// `δ < |B|`: the field-aligned product state.
    FieldAligned,
    /// `δ = |B|`: equal mixture of the two.
    Degenerate,
}

pub fn ground_case(p: &ModelParams) -> GroundCase {
    let gap = p.delta() - p.b.abs();
    if gap > EPS_DEG {
        GroundCase::Coupled
    } else if gap < -EPS_DEG {
        GroundCase::FieldAligned
    } else {
        GroundCase::Degenerate
    }
}

/// Zero-temperature state; `T` is ignored.
///
/// For `B < 0` the field-aligned state is `|00⟩` instead of `|11⟩`, which
/// keeps the `B → −B` symmetry of the model intact.
pub fn ground_state(p: &ModelParams) -> DensityMatrix {
    let spec = spectrum(p);
    let aligned = if p.b < 0.0 { 2 } else { 3 };
    let mut weights = [0.0; 4];
    match ground_case(p) {
        GroundCase::Coupled => weights[1] = 1.0,
        GroundCase::FieldAligned => weights[aligned] = 1.0,
        GroundCase::Degenerate => {
            weights[1] = 0.5;
            weights[aligned] = 0.5;
        }
    }
    let mut m = Mat4::zeros();
    for (w, psi) in weights.iter().zip(&spec.states) {
        if *w > 0.0 {
            m += Mat4::outer(psi).scale(*w);
        }
    }
    DensityMatrix::with_known_spectrum(m, weights, spec.states)
}

/// Thermal state for `T > 0`, ground state for `T = 0`.
pub fn equilibrium_state(p: &ModelParams) -> Result<DensityMatrix> {
    if p.t == 0.0 {
        Ok(ground_state(p))
    } else {
        thermal_state(p)
    }
}

/// Closed-form `√ρ`:
///
/// ```text
///          ⎛ e^{-βB}  0                 0                0      ⎞
/// √ρ = 1/√Z⎜ 0        cosh βδ          -e^{iθ} sinh βδ    0      ⎟
///          ⎜ 0        -e^{-iθ} sinh βδ  cosh βδ          0      ⎟
///          ⎝ 0        0                 0                e^{βB} ⎠
/// ```
pub fn sqrt_thermal_state(p: &ModelParams) -> Result<Mat4> {
    sqrt_block(p, 1.0)
}

/// The square root with the middle block doubled (`2 cosh βδ`, `2 sinh βδ`),
/// as printed in the original derivation. It is not a square root of `ρ`:
/// `Tr[(√ρ)²] ≠ 1`. Kept only to document the discrepancy.
pub fn sqrt_thermal_state_verbatim(p: &ModelParams) -> Result<Mat4> {
    sqrt_block(p, 2.0)
}

fn sqrt_block(p: &ModelParams, middle_factor: f64) -> Result<Mat4> {
    let w = p.gibbs_weights()?;
    let (r1, r2) = (w.psi1.sqrt(), w.psi2.sqrt());
    let mid = 0.5 * middle_factor * (r1 + r2);
    let off = p.phase() * (-0.5 * middle_factor * (r2 - r1));
    let mut m = Mat4::zeros();
    m[(0, 0)] = C64::new(w.up.sqrt(), 0.0);
    m[(1, 1)] = C64::new(mid, 0.0);
    m[(2, 2)] = C64::new(mid, 0.0);
    m[(1, 2)] = off;
    m[(2, 1)] = off.conj();
    m[(3, 3)] = C64::new(w.down.sqrt(), 0.0);
    Ok(m)
}
