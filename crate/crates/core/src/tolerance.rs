//! Numerical tolerances shared by the library, the CLI verification suites
//! and the tests. Every threshold lives here so that the checks agree with
//! the code they check.

/// Entrywise equality of matrices (max modulus of the difference).
pub const EPS_EQ: f64 = 1e-12;

/// Smallest eigenvalue still accepted as "positive semidefinite"; anything
/// in `[-EPS_PSD, 0)` is clamped to zero.
pub const EPS_PSD: f64 = 1e-12;

/// Reconstruction residual for eigendecompositions and square roots.
pub const EPS_RECON: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Hilbert-Schmidt norm drops below this
/// fraction of the matrix norm.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

/// Hard cap on cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Width of the `δ = B` ground-state degeneracy window.
pub const EPS_DEG: f64 = 1e-12;

/// Below this the X-state trace-discord denominator is treated as zero.
pub const EPS_DEN: f64 = 1e-12;

/// Largest excursion outside `[0, 1]` that is silently clamped. Larger
/// excursions are reported as errors.
pub const CLAMP_LIMIT: f64 = 1e-8;

/// Maximum modulus of the entries that must vanish in an X state.
pub const X_FORM_TOL: f64 = 1e-10;

/// Hermiticity, unit trace and positivity checks on density matrices.
pub const DENSITY_TOL: f64 = 1e-12;
