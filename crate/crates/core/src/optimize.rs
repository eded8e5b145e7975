//! Derivative-free search primitives: low-discrepancy starts, compass
//! (pattern) search in `Rⁿ`, and a pattern search on the unit sphere.

use rand::Rng;

/// First nine primes, one Halton base per coordinate of the CQ family.
pub const HALTON_BASES: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];

/// Radical inverse of `index` in `base`.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub final_step: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct CompassOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_iterations: usize,
}

/// Opportunistic compass search (minimisation).
///
/// Each iteration polls `±h·e_k` along the current orthonormal basis and moves
/// to the first improving point, doubling `h` up to its initial value. A
/// failed poll halves `h`. When an `rng` is given, a failed poll first
/// replaces the basis by a fresh random orthonormal frame and `h` is halved
/// only after `n` consecutive failures, which lets the search slide along
/// kinks that are not axis-aligned.
pub fn compass_search<F, R>(mut f: F, x0: &[f64], opts: CompassOptions, mut rng: Option<&mut R>) -> SearchOutcome
where
    F: FnMut(&[f64]) -> f64,
    R: Rng,
{
    let n = x0.len();
    let mut basis: Vec<Vec<f64>> = (0..n).map(|k| unit(n, k)).collect();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut evaluations = 1;
    let mut h = opts.initial_step;
    let mut iterations = 0;
    let mut trial = vec![0.0; n];
    let mut failures = 0;

    while iterations < opts.max_iterations && h >= opts.min_step {
        iterations += 1;
        let mut improved = false;
        'poll: for dir in &basis {
            for sign in [1.0, -1.0] {
                for k in 0..n {
                    trial[k] = x[k] + sign * h * dir[k];
                }
                let ft = f(&trial);
                evaluations += 1;
                if ft < fx {
                    x.copy_from_slice(&trial);
                    fx = ft;
                    improved = true;
                    failures = 0;
                    h = (2.0 * h).min(opts.initial_step);
                    break 'poll;
                }
            }
        }
        if !improved {
            match rng.as_deref_mut() {
                Some(rng) => {
                    basis = random_frame(n, rng);
                    failures += 1;
                    if failures >= n {
                        h *= 0.5;
                        failures = 0;
                    }
                }
                None => h *= 0.5,
            }
        }
    }
    SearchOutcome { x, value: fx, iterations, evaluations, final_step: h }
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[k] = 1.0;
    e
}

/// Gram-Schmidt on uniformly drawn vectors.
fn random_frame<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(n);
    while frame.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for e in &frame {
            let d: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= d * ei;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|a| *a /= norm);
            frame.push(v);
        }
    }
    frame
}

pub fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Unit vector from polar angle `polar ∈ [0, π]` and azimuth.
pub fn spherical(polar: f64, azimuth: f64) -> [f64; 3] {
    let s = polar.sin();
    [s * azimuth.cos(), s * azimuth.sin(), polar.cos()]
}

/// Orthonormal tangent frame at `u`.
fn tangent_frame(u: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let a = if u[0].abs() <= u[1].abs() && u[0].abs() <= u[2].abs() {
        [1.0, 0.0, 0.0]
    } else if u[1].abs() <= u[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let e1 = normalize3(cross(u, a));
    let e2 = cross(u, e1);
    (e1, e2)
}

#[derive(Clone, Debug)]
pub struct SphereOutcome {
    pub u: [f64; 3],
    pub value: f64,
    /// Value at the start, then the best value at the end of each step size.
    pub history: Vec<f64>,
    pub evaluations: usize,
    pub final_step: f64,
}

/// Pattern search for the minimum of `f` on the unit sphere.
///
/// Polls eight tangent directions (axes and diagonals of the local frame),
/// moves along a great-circle step of angle `h` on success and halves `h`
/// after a failed poll. Stops once `h < min_step` or after `max_polls`.
pub fn sphere_search<F>(mut f: F, u0: [f64; 3], initial_step: f64, min_step: f64, max_polls: usize) -> SphereOutcome
where
    F: FnMut([f64; 3]) -> f64,
{
    let mut u = normalize3(u0);
    let mut fu = f(u);
    let mut evaluations = 1;
    let mut h = initial_step;
    let mut history = vec![fu];
    let mut polls = 0;
    let d = std::f64::consts::FRAC_1_SQRT_2;
    let dirs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (d, d), (-d, -d), (d, -d), (-d, d)];

    while h >= min_step && polls < max_polls {
        polls += 1;
        let (e1, e2) = tangent_frame(u);
        let (c, s) = (h.cos(), h.sin());
        let mut improved = false;
        for (a, b) in dirs {
            let t = [a * e1[0] + b * e2[0], a * e1[1] + b * e2[1], a * e1[2] + b * e2[2]];
            let cand = normalize3([c * u[0] + s * t[0], c * u[1] + s * t[1], c * u[2] + s * t[2]]);
            let fc = f(cand);
            evaluations += 1;
            if fc < fu {
                u = cand;
                fu = fc;
                improved = true;
                break;
            }
        }
        if !improved {
            history.push(fu);
            h *= 0.5;
        }
    }
    SphereOutcome { u, value: fu, history, evaluations, final_step: h }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn halton_base2() {
        let v: Vec<f64> = (1..5).map(|i| halton(i, 2)).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.75, 0.125]);
    }

    #[test]
    fn compass_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2);
        let opts = CompassOptions { initial_step: 1.0, min_step: 1e-10, max_iterations: 10_000 };
        let out = compass_search(f, &[0.0, 0.0], opts, None::<&mut ChaCha8Rng>);
        assert!((out.x[0] - 1.0).abs() < 1e-8);
        assert!((out.x[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn rotating_frame_slides_along_diagonal_kink() {
        // |x - y| + 0.01|x + y - 2| has its kink along the diagonal
        let f = |x: &[f64]| (x[0] - x[1]).abs() + 0.01 * (x[0] + x[1] - 2.0).abs();
        let opts = CompassOptions { initial_step: 0.5, min_step: 1e-10, max_iterations: 20_000 };
        let fixed = compass_search(f, &[3.0, -1.0], opts, None::<&mut ChaCha8Rng>);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rotating = compass_search(f, &[3.0, -1.0], opts, Some(&mut rng));
        assert!(fixed.value > 1e-3, "fixed {}", fixed.value);
        assert!(rotating.value < 1e-6, "rotating {}", rotating.value);
    }

    #[test]
    fn sphere_search_finds_axis() {
        let target = normalize3([0.3, -0.5, 0.8]);
        let f = |u: [f64; 3]| -dot3(u, target);
        let out = sphere_search(f, [1.0, 0.0, 0.0], 0.2, 1e-10, 10_000);
        assert!((out.value + 1.0).abs() < 1e-15);
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
    }
}
