//! Brute-force evaluators that go back to the definitions of the three
//! discords and share no closed form with [`crate::measures`]:
//!
//! * trace: minimise `‖ρ − χ‖₁` over classical-quantum states `χ`;
//! * Hellinger: minimise `2‖√ρ − Π(√ρ)‖₂²` over projective measurements on A;
//! * Bures: evaluate the fidelity maximand on a dense grid of axes.
//!
//! Minimisers return upper bounds on the true infimum and the grid maximiser
//! a lower bound on the true maximum.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, hs_norm, kron, pauli, trace_norm, Mat2, Mat4};
use crate::measures::bures_maximand;
use crate::optimize::{compass_search, halton, sphere_search, spherical, CompassOptions};

/// Two-outcome projective measurement on qubit A along a unit axis `u`:
/// `Π± = (I ± u·σ)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochMeasurement {
    u: [f64; 3],
}

impl BlochMeasurement {
    /// Normalises `u`; a zero vector falls back to the z axis.
    pub fn new(u: [f64; 3]) -> Self {
        let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        if n == 0.0 {
            Self { u: [0.0, 0.0, 1.0] }
        } else {
            Self { u: u.map(|x| x / n) }
        }
    }

    /// Polar angle in `[0, π]`, azimuth in `[0, 2π)`.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        Self::new(spherical(polar, azimuth))
    }

    pub fn axis(&self) -> [f64; 3] {
        self.u
    }

    /// `(polar, azimuth)`.
    pub fn angles(&self) -> (f64, f64) {
        let polar = self.u[2].clamp(-1.0, 1.0).acos();
        let az = self.u[1].atan2(self.u[0]).rem_euclid(2.0 * std::f64::consts::PI);
        (polar, az)
    }

    /// `(Π₊, Π₋)`.
    pub fn projectors(&self) -> (Mat2, Mat2) {
        let s = pauli::dot(self.u);
        let id = Mat2::identity();
        ((id + s).scale(0.5), (id - s).scale(0.5))
    }
}

/// `p Π₊ ⊗ ρ(b₁) + (1 − p) Π₋ ⊗ ρ(b₂)` with qubit-B Bloch vectors `b₁`, `b₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CQState {
    pub p: f64,
    pub measurement: BlochMeasurement,
    pub b1: [f64; 3],
    pub b2: [f64; 3],
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cq_matrix(p: f64, m: &BlochMeasurement, b1: [f64; 3], b2: [f64; 3]) -> Mat4 {
    let (plus, minus) = m.projectors();
    kron(&plus, &pauli::bloch_state(b1)).scale(p) + kron(&minus, &pauli::bloch_state(b2)).scale(1.0 - p)
}

pub fn cq_assemble(s: &CQState) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&s.p) {
        return Err(Error::InvalidProbability { p: s.p });
    }
    for b in [s.b1, s.b2] {
        let n = norm3(b);
        if n > 1.0 + 1e-12 {
            return Err(Error::InvalidBlochVector { norm: n });
        }
    }
    DensityMatrix::new(cq_matrix(s.p, &s.measurement, s.b1, s.b2))
}

/// `Σ± (Π± ⊗ I) M (Π± ⊗ I)`.
pub fn projective_measure_a(m: &Mat4, u: &BlochMeasurement) -> Mat4 {
    let (plus, minus) = u.projectors();
    let id = pauli::identity();
    let (pp, pm) = (kron(&plus, &id), kron(&minus, &id));
    pp * *m * pp + pm * *m * pm
}

/// Axes of the latitude-longitude grid at `level`: `2^level + 1` polar lines
/// (poles included) by `2^(level+1)` azimuths. Grids are nested in `level`.
fn level_grid(level: u32) -> impl Iterator<Item = [f64; 3]> {
    let n_polar = (1usize << level) + 1;
    let n_az = 1usize << (level + 1);
    let dp = std::f64::consts::PI / (n_polar - 1) as f64;
    let da = 2.0 * std::f64::consts::PI / n_az as f64;
    (0..n_polar).flat_map(move |i| (0..n_az).map(move |k| spherical(i as f64 * dp, k as f64 * da)))
}

/// `2 min_Π ‖√ρ − Π(√ρ)‖₂²` over measurement axes. For every level up to
/// `grid_level` the best grid axis seeds a sphere pattern search, so the result
/// is non-increasing in `grid_level`.
pub fn hellinger_gqd_bruteforce(rho: &DensityMatrix, grid_level: u32) -> Result<f64> {
    let root = rho.sqrt()?;
    let f = |u: [f64; 3]| {
        let d = root - projective_measure_a(&root, &BlochMeasurement::new(u));
        2.0 * hs_norm(&d).powi(2)
    };
    let mut best = f64::INFINITY;
    for level in 0..=grid_level {
        let (mut v0, mut u0) = (f64::INFINITY, [0.0, 0.0, 1.0]);
        for u in level_grid(level) {
            let v = f(u);
            if v < v0 {
                v0 = v;
                u0 = u;
            }
        }
        let step = std::f64::consts::PI / (1u64 << level) as f64;
        let out = sphere_search(f, u0, step, 1e-10, 5000);
        best = best.min(out.value).min(v0);
    }
    Ok(best)
}

/// Evaluation budget for [`trace_gqd_bruteforce`].
#[derive(Clone, Copy, Debug)]
pub struct TraceBudget {
    pub starts: usize,
    /// Iteration cap for each search stage of each start.
    pub iterations: usize,
    /// Seeds the random frame rotations of the joint search.
    pub seed: u64,
}

impl Default for TraceBudget {
    fn default() -> Self {
        Self { starts: 5, iterations: 400, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceOracle {
    pub value: f64,
    pub best_start: usize,
    pub final_step: f64,
    pub evaluations: usize,
    pub best: CQState,
}

/// Smoothing widths for the joint search, ending with the exact trace norm.
const SMOOTHING: [f64; 6] = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 0.0];

/// Map the 9 search coordinates onto a valid CQ state: `p` is clipped to
/// `[0, 1]` and each Bloch vector is radially projected into the unit ball.
fn decode(x: &[f64]) -> CQState {
    let ball = |v: [f64; 3]| {
        let n = norm3(v);
        if n > 1.0 {
            v.map(|a| a / n)
        } else {
            v
        }
    };
    CQState {
        p: x[2].clamp(0.0, 1.0),
        measurement: BlochMeasurement::from_angles(x[0], x[1]),
        b1: ball([x[3], x[4], x[5]]),
        b2: ball([x[6], x[7], x[8]]),
    }
}

fn encode(s: &CQState) -> Vec<f64> {
    let (polar, az) = s.measurement.angles();
    vec![polar, az, s.p, s.b1[0], s.b1[1], s.b1[2], s.b2[0], s.b2[1], s.b2[2]]
}

/// The CQ state obtained by measuring A along `m` and keeping B's
/// conditional states.
fn dephased(rho: &Mat4, m: &BlochMeasurement) -> CQState {
    let (plus, minus) = m.projectors();
    let id = pauli::identity();
    let conditional = |proj: &Mat2| {
        let pk = kron(proj, &id);
        let block = pk * *rho * pk;
        // partial trace over A
        let mut b = Mat2::zeros();
        for a in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    b[(i, j)] += block[(2 * a + i, 2 * a + j)];
                }
            }
        }
        let w = b.trace().re;
        let bloch = if w > 1e-300 {
            pauli::all().map(|s| (b * s).trace().re / w)
        } else {
            [0.0; 3]
        };
        (w, bloch)
    };
    let (p, b1) = conditional(&plus);
    let (_, b2) = conditional(&minus);
    CQState { p: p.clamp(0.0, 1.0), measurement: *m, b1, b2 }
}

fn smoothed_distance(rho: &Mat4, s: &CQState, eps: f64) -> f64 {
    let d = *rho - cq_matrix(s.p, &s.measurement, s.b1, s.b2);
    match hermitian_eig(&d) {
        Ok(eig) => eig.values.iter().map(|x| (x * x + eps * eps).sqrt()).sum(),
        // non-finite points never win the poll
        Err(_) => f64::INFINITY,
    }
}

/// `min_χ ‖ρ − χ‖₁` over two-outcome CQ states.
///
/// Each start is a low-discrepancy measurement axis. The axis is first
/// optimised with `χ` tied to the dephased state along it; the full nine
/// coordinates are then polished by a compass search with rotating frames
/// on a sequence of smoothed objectives `Σ√(λ² + ε²)` that ends at `ε = 0`.
pub fn trace_gqd_bruteforce(rho: &DensityMatrix, budget: &TraceBudget) -> Result<TraceOracle> {
    let m = *rho.matrix();
    let results: Vec<(f64, f64, usize, CQState)> = (0..budget.starts)
        .into_par_iter()
        .map(|start| {
            let idx = start as u64 + 1;
            let z = 1.0 - 2.0 * halton(idx, 2);
            let u0 = [(1.0 - z * z).max(0.0).sqrt() * (2.0 * std::f64::consts::PI * halton(idx, 3)).cos(),
                (1.0 - z * z).max(0.0).sqrt() * (2.0 * std::f64::consts::PI * halton(idx, 3)).sin(),
                z];

            let axis_objective = |u: [f64; 3]| smoothed_distance(&m, &dephased(&m, &BlochMeasurement::new(u)), 0.0);
            let axis = sphere_search(axis_objective, u0, 0.5, 1e-10, budget.iterations);
            let mut evaluations = axis.evaluations;
            let mut best_state = dephased(&m, &BlochMeasurement::new(axis.u));
            let mut best_value = axis.value;

            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_mul(1_000_003).wrapping_add(start as u64));
            let mut x = encode(&best_state);
            let mut final_step = axis.final_step;
            for eps in SMOOTHING {
                let opts = CompassOptions {
                    initial_step: 0.02,
                    min_step: eps.max(1e-10) * 1e-2,
                    max_iterations: budget.iterations,
                };
                let out = compass_search(|y| smoothed_distance(&m, &decode(y), eps), &x, opts, Some(&mut rng));
                evaluations += out.evaluations;
                final_step = out.final_step;
                x = out.x;
            }
            let polished = decode(&x);
            let v = smoothed_distance(&m, &polished, 0.0);
            if v < best_value {
                best_value = v;
                best_state = polished;
            }
            (best_value, final_step, evaluations, best_state)
        })
        .collect();

    let (best_start, best) = results
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .ok_or_else(|| Error::InvalidSweep("trace oracle needs at least one start".into()))?;
    // re-evaluate through the general trace norm as a consistency guard
    let value = trace_norm(&(m - *cq_assemble(&best.3)?.matrix()))?;
    Ok(TraceOracle {
        value,
        best_start,
        final_step: best.1,
        evaluations: results.iter().map(|r| r.2).sum(),
        best: best.3,
    })
}

/// Largest value of the Bures fidelity maximand on the level-`grid_level`
/// grid, with no local refinement.
pub fn bures_maxfid_grid(rho: &DensityMatrix, grid_level: u32) -> Result<f64> {
    let root = rho.sqrt()?;
    let axes: Vec<[f64; 3]> = level_grid(grid_level).collect();
    axes.par_iter()
        .map(|&u| bures_maximand(&root, u))
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))
}

/// Random two-outcome CQ state; used by the zero-discord certification.
pub fn random_cq_state<R: rand::Rng>(rng: &mut R) -> CQState {
    let mut ball = || loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if norm3(v) <= 1.0 {
            return v;
        }
    };
    let b1 = ball();
    let b2 = ball();
    let polar = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let az = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    CQState { p: rng.gen(), measurement: BlochMeasurement::from_angles(polar, az), b1, b2 }
}
