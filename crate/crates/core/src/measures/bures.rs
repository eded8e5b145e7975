use super::{finish, Branch, Diagnostics, Measure, MeasureResult, Method};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, matrix_sqrt_psd, pauli, Mat4};
use crate::optimize::{dot3, sphere_search, spherical};
use crate::tolerance::CLAMP_LIMIT;

/// `(2 + √2)`, the normalisation that maps the maximal Bures discord of
/// two qubits to one.
const BURES_NORM: f64 = 2.0 + std::f64::consts::SQRT_2;

/// Optimiser settings for [`bures_gqd_with`].
#[derive(Clone, Copy, Debug)]
pub struct BuresOptions {
    /// Polar grid lines, poles included.
    pub polar: usize,
    /// Azimuthal grid lines.
    pub azimuth: usize,
    /// Number of well-separated grid maxima refined locally.
    pub starts: usize,
    /// Refinement stops once the angular step drops below this.
    pub min_step: f64,
    pub max_polls: usize,
}

impl Default for BuresOptions {
    fn default() -> Self {
        Self { polar: 33, azimuth: 64, starts: 3, min_step: 1e-9, max_polls: 2000 }
    }
}

/// `½(1 − Tr Λ + 2(λ₁ + λ₂))` with `Λ = √ρ (u·σ ⊗ I) √ρ` and `λ₁ ≥ λ₂` the two
/// largest eigenvalues of `Λ`.
pub fn bures_maximand(sqrt_rho: &Mat4, u: [f64; 3]) -> Result<f64> {
    let op = kron(&pauli::dot(u), &pauli::identity());
    let lambda = *sqrt_rho * op * *sqrt_rho;
    let eig = hermitian_eig(&lambda)?;
    let tr: f64 = eig.values.iter().sum();
    Ok(0.5 * (1.0 - tr + 2.0 * (eig.values[0] + eig.values[1])))
}

/// `√((2 + √2)(1 − √F))`, with round-off above `F = 1` absorbed.
pub fn bures_from_fidelity(max_fidelity: f64) -> f64 {
    let sq = BURES_NORM * (1.0 - max_fidelity.max(0.0).sqrt());
    if sq < 0.0 && sq > -CLAMP_LIMIT {
        0.0
    } else {
        sq.sqrt()
    }
}

pub fn bures_gqd(rho: &DensityMatrix) -> Result<MeasureResult> {
    bures_gqd_with(rho, &BuresOptions::default())
}

/// Bures discord: latitude-longitude grid over measurement axes followed by
/// sphere pattern search from the best few grid points.
pub fn bures_gqd_with(rho: &DensityMatrix, opts: &BuresOptions) -> Result<MeasureResult> {
    let root = rho.sqrt()?;
    let f = |u: [f64; 3]| bures_maximand(&root, u);

    let mut grid = Vec::with_capacity(opts.polar * opts.azimuth);
    let polar_step = std::f64::consts::PI / (opts.polar - 1) as f64;
    for i in 0..opts.polar {
        for k in 0..opts.azimuth {
            let u = spherical(i as f64 * polar_step, 2.0 * std::f64::consts::PI * k as f64 / opts.azimuth as f64);
            grid.push((f(u)?, u));
        }
    }
    let mut evaluations = grid.len();
    grid.sort_by(|a, b| b.0.total_cmp(&a.0));

    let separation = (2.0 * polar_step).cos();
    let mut seeds: Vec<(f64, [f64; 3])> = Vec::new();
    for &(v, u) in &grid {
        if seeds.len() == opts.starts {
            break;
        }
        if seeds.iter().all(|(_, s)| dot3(*s, u) < separation) {
            seeds.push((v, u));
        }
    }

    let mut failure = None;
    let mut best: Option<(f64, [f64; 3], Vec<f64>)> = None;
    for &(_, u0) in &seeds {
        let out = sphere_search(
            |u| match f(u) {
                Ok(v) => -v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            u0,
            polar_step,
            opts.min_step,
            opts.max_polls,
        );
        evaluations += out.evaluations;
        let value = -out.value;
        let history: Vec<f64> = out.history.iter().map(|v| -v).collect();
        if best.as_ref().map_or(true, |b| value > b.0) {
            best = Some((value, out.u, history));
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let (max_f, u, history) = best.expect("at least one seed");

    let settled = match history.as_slice() {
        [.., a, b] => (b - a).abs() < 1e-6,
        _ => true,
    };
    let warning = (!settled).then(|| "fidelity refinement had not settled at the final step".to_string());
    let diag = Diagnostics {
        branch: Some(Branch::from_axis(u)),
        argmax: Some(u),
        grid: Some((opts.polar, opts.azimuth)),
        evaluations: Some(evaluations),
        rounds: Some(history.len() - 1),
        history,
        max_fidelity: Some(max_f),
        warning,
        raw_value: 0.0,
    };
    if max_f > 1.0 + CLAMP_LIMIT {
        return Err(Error::ValueOutOfRange { measure: "bures fidelity", value: max_f });
    }
    finish(Measure::Bures, Method::Definitional, bures_from_fidelity(max_f), diag)
}

/// Uhlmann fidelity `F(ρ, χ) = (Tr √(√ρ χ √ρ))²`.
pub fn uhlmann_fidelity(rho: &DensityMatrix, chi: &DensityMatrix) -> Result<f64> {
    let root = rho.sqrt()?;
    let inner = (root * *chi.matrix() * root).hermitian_part();
    let s = matrix_sqrt_psd(&inner)?.trace().re;
    Ok((s * s).min(1.0))
}
