//! Validated two-qubit density matrices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, matrix_sqrt_psd, Mat4, C64};
use crate::tolerance::DENSITY_TOL;

/// A 4×4 Hermitian, positive semidefinite, unit-trace matrix.
///
/// States built from a known eigendecomposition keep it, so that `√ρ` does
/// not lose eigenvalues below machine precision to round-off.
#[derive(Clone, Copy, Debug)]
pub struct DensityMatrix(Mat4, Option<KnownSpectrum>);

#[derive(Clone, Copy, Debug)]
struct KnownSpectrum {
    weights: [f64; 4],
    states: [[C64; 4]; 4],
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl DensityMatrix {
    /// Checks the density-matrix invariants to within [`DENSITY_TOL`].
    pub fn new(m: Mat4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let herm = m.max_abs_diff(&m.adjoint());
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let min = hermitian_eig(&m)?.values[3];
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(m.hermitian_part(), None))
    }

    /// `m` together with its eigendecomposition: orthonormal `states` with
    /// probabilities `weights`. The caller guarantees consistency.
    pub(crate) fn with_known_spectrum(m: Mat4, weights: [f64; 4], states: [[C64; 4]; 4]) -> Self {
        Self(m, Some(KnownSpectrum { weights, states }))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) vector.
    pub fn pure(psi: &[C64; 4]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2 > 0.0) {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        Self::new(Mat4::outer(psi).scale(1.0 / norm2))
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat4::identity().scale(0.25), None)
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        Self::new(self.0.scale(w) + other.0.scale(1.0 - w))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// `√ρ`, from the known eigendecomposition when there is one.
    pub fn sqrt(&self) -> Result<Mat4> {
        match &self.1 {
            Some(k) => {
                let mut r = Mat4::zeros();
                for (w, psi) in k.weights.iter().zip(&k.states) {
                    if *w > 0.0 {
                        r += Mat4::outer(psi).scale(w.sqrt());
                    }
                }
                Ok(r.hermitian_part())
            }
            None => self.sqrt_numeric(),
        }
    }

    /// `√ρ` from a numerical eigendecomposition of the matrix entries. Its
    /// absolute accuracy is about `√ε` when `ρ` has eigenvalues below `ε`.
    pub fn sqrt_numeric(&self) -> Result<Mat4> {
        matrix_sqrt_psd(&self.0)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    /// Real and imaginary parts, row-major, for serialisation.
    pub fn to_rows(&self) -> MatrixRows {
        let rows = self.0.rows();
        MatrixRows {
            re: rows.map(|r| r.map(|z| z.re)),
            im: rows.map(|r| r.map(|z| z.im)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixRows {
    pub re: [[f64; 4]; 4],
    pub im: [[f64; 4]; 4],
}
