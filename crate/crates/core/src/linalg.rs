//! Fixed-size complex matrix kernel.
//!
//! Everything the discord measures need is here: a cyclic Jacobi solver for
//! Hermitian matrices, spectral functions built on top of it (PSD square
//! root, exponential), norms and the two-qubit tensor product.
//!
//! Basis convention for two qubits: `|00⟩, |01⟩, |10⟩, |11⟩`, qubit A is the
//! left tensor factor, and `σz|0⟩ = +|0⟩`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::{EPS_EQ, EPS_PSD, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense `N×N` complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix<const N: usize> {
    data: [[C64; N]; N],
}

pub type Mat2 = ComplexMatrix<2>;
pub type Mat3 = ComplexMatrix<3>;
pub type Mat4 = ComplexMatrix<4>;

impl<const N: usize> Default for ComplexMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> ComplexMatrix<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Self { data: [[ZERO; N]; N] }
    }

    pub fn identity() -> Self {
        Self::from_real_diag([1.0; N])
    }

    pub fn from_rows(data: [[C64; N]; N]) -> Self {
        Self { data }
    }

    pub fn from_real_rows(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = C64::new(rows[i][j], 0.0);
            }
        }
        m
    }

    pub fn from_real_diag(diag: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.data[i][i] = C64::new(d, 0.0);
        }
        m
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn outer(psi: &[C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> &[[C64; N]; N] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = self.data[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.data[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let mut m = *self;
        for row in m.data.iter_mut() {
            for z in row.iter_mut() {
                *z = f(*z);
            }
        }
        m
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self.data[i][j] - other.data[i][j]).norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn mul_vec(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [ZERO; N];
        for i in 0..N {
            out[i] = (0..N).map(|j| self.data[i][j] * v[j]).sum();
        }
        out
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> [C64; N] {
        let mut out = [ZERO; N];
        for i in 0..N {
            out[i] = self.data[i][j];
        }
        out
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    s += self.data[i][j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

impl<const N: usize> Index<(usize, usize)> for ComplexMatrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for ComplexMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i][j]
    }
}

impl<const N: usize> Add for ComplexMatrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<const N: usize> AddAssign for ComplexMatrix<N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.data[i][j] += rhs.data[i][j];
            }
        }
    }
}

impl<const N: usize> Sub for ComplexMatrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.data[i][j] -= rhs.data[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Neg for ComplexMatrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl<const N: usize> Mul for ComplexMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.data[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        out
    }
}

/// Pauli matrices and the 2×2 identity.
pub mod pauli {
    use super::{Mat2, C64, I, ONE, ZERO};

    pub fn identity() -> Mat2 {
        Mat2::identity()
    }

    pub fn x() -> Mat2 {
        Mat2::from_rows([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> Mat2 {
        Mat2::from_rows([[ZERO, -I], [I, ZERO]])
    }

    pub fn z() -> Mat2 {
        Mat2::from_real_diag([1.0, -1.0])
    }

    /// `[σx, σy, σz]`.
    pub fn all() -> [Mat2; 3] {
        [x(), y(), z()]
    }

    /// `u·σ` for a real 3-vector `u`.
    pub fn dot(u: [f64; 3]) -> Mat2 {
        Mat2::from_rows([
            [C64::new(u[2], 0.0), C64::new(u[0], -u[1])],
            [C64::new(u[0], u[1]), C64::new(-u[2], 0.0)],
        ])
    }

    /// Qubit density matrix `(I + b·σ)/2` for a Bloch vector `b`.
    pub fn bloch_state(b: [f64; 3]) -> Mat2 {
        (Mat2::identity() + dot(b)).scale(0.5)
    }
}

/// Eigenvalues (non-increasing) and the matching orthonormal eigenvectors,
/// stored as the columns of `vectors`.
#[derive(Clone, Copy, Debug)]
pub struct EigenSystem<const N: usize> {
    pub values: [f64; N],
    pub vectors: ComplexMatrix<N>,
    /// Jacobi sweeps used.
    pub sweeps: usize,
}

impl<const N: usize> EigenSystem<N> {
    pub fn vector(&self, i: usize) -> [C64; N] {
        self.vectors.column(i)
    }

    /// `V·f(Λ)·V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix<N> {
        let mut out = ComplexMatrix::zeros();
        for k in 0..N {
            let w = f(self.values[k]);
            if w == 0.0 {
                continue;
            }
            for i in 0..N {
                let vik = self.vectors[(i, k)] * w;
                for j in 0..N {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<N> {
        self.apply(|x| x)
    }
}

/// Cyclic complex Jacobi diagonalisation of a Hermitian matrix.
///
/// The input is symmetrised as `(H + H†)/2` first. Each pivot `(p, q)` is
/// annihilated by a phase rotation that makes `h_pq` real followed by an
/// ordinary Jacobi rotation. Degenerate subspaces come back in whatever
/// orthonormal basis the sweep order produces.
pub fn hermitian_eig<const N: usize>(h: &ComplexMatrix<N>) -> Result<EigenSystem<N>> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::<N>::identity();
    let threshold = JACOBI_OFF_TOL * hs_norm(&a);

    let mut sweeps = 0;
    loop {
        let off = a.off_diagonal_norm();
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = std::array::from_fn(|k| a[(order[k], order[k])].re);
    let mut vectors = ComplexMatrix::zeros();
    for (k, &src) in order.iter().enumerate() {
        for i in 0..N {
            vectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(EigenSystem { values, vectors, sweeps })
}

fn rotate<const N: usize>(a: &mut ComplexMatrix<N>, v: &mut ComplexMatrix<N>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] acting on the (p, q) plane.
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    for k in 0..N {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..N {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    for k in 0..N {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Square root of a Hermitian PSD matrix. Eigenvalues in `[-EPS_PSD, 0)` are
/// clamped to zero; anything more negative is rejected.
pub fn matrix_sqrt_psd<const N: usize>(m: &ComplexMatrix<N>) -> Result<ComplexMatrix<N>> {
    let eig = hermitian_eig(m)?;
    let min = eig.values[N - 1];
    if min < -EPS_PSD {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(eig.apply(|x| x.max(0.0).sqrt()))
}

/// `exp(s·H)` for Hermitian `H`.
pub fn matrix_exp_hermitian<const N: usize>(h: &ComplexMatrix<N>, s: f64) -> Result<ComplexMatrix<N>> {
    let eig = hermitian_eig(h)?;
    Ok(eig.apply(|x| (s * x).exp()))
}

/// Trace norm `Tr √(M†M)`, the sum of singular values.
pub fn trace_norm<const N: usize>(m: &ComplexMatrix<N>) -> Result<f64> {
    if m.is_hermitian(EPS_EQ) {
        let eig = hermitian_eig(m)?;
        Ok(eig.values.iter().map(|x| x.abs()).sum())
    } else {
        let eig = hermitian_eig(&(m.adjoint() * *m))?;
        Ok(eig.values.iter().map(|x| x.max(0.0).sqrt()).sum())
    }
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm<const N: usize>(m: &ComplexMatrix<N>) -> f64 {
    m.rows().iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `A ⊗ B` with `A` as the left (most significant) factor.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::EPS_RECON;

    fn bell_minus() -> Mat4 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Mat4::outer(&[ZERO, C64::new(-s, 0.0), C64::new(s, 0.0), ZERO])
    }

    #[test]
    fn eig_of_diagonal() {
        let eig = hermitian_eig(&Mat4::from_real_diag([1.0, 1.0, -1.0, -1.0])).unwrap();
        assert_eq!(eig.values, [1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn eig_sorts_non_increasing() {
        let eig = hermitian_eig(&Mat4::from_real_diag([-3.0, 2.0, 0.5, 7.0])).unwrap();
        assert_eq!(eig.values, [7.0, 2.0, 0.5, -3.0]);
        assert!(eig.reconstruct().approx_eq(&Mat4::from_real_diag([-3.0, 2.0, 0.5, 7.0]), 1e-14));
    }

    #[test]
    fn eig_of_sigma_x() {
        let eig = hermitian_eig(&pauli::x()).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] + 1.0).abs() < 1e-14);
        let v0 = eig.vector(0);
        let v1 = eig.vector(1);
        // eigenvectors are (1, ±1)/√2 up to a global phase
        assert!(((v0[0] - v0[1]).norm()) < 1e-14);
        assert!(((v1[0] + v1[1]).norm()) < 1e-14);
        assert!((v0[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn eig_of_thermal_middle_block() {
        // At β = δ = 1 the Gibbs block is [[cosh2, -sinh2], [-sinh2, cosh2]]/Z
        // with eigenvalues e^{±2}/Z.
        let z = 2.0 * ((2.0f64).cosh() + 1.0);
        let block = Mat2::from_real_rows([
            [2.0f64.cosh() / z, -(2.0f64).sinh() / z],
            [-(2.0f64).sinh() / z, 2.0f64.cosh() / z],
        ]);
        let eig = hermitian_eig(&block).unwrap();
        assert!((eig.values[0] - 2.0f64.exp() / z).abs() < 1e-14);
        assert!((eig.values[1] - (-2.0f64).exp() / z).abs() < 1e-14);
    }

    #[test]
    fn eig_of_zero_matrix() {
        let eig = hermitian_eig(&Mat4::zeros()).unwrap();
        assert_eq!(eig.values, [0.0; 4]);
        assert_eq!(eig.sweeps, 0);
    }

    #[test]
    fn eig_rejects_nan() {
        let mut m = Mat4::identity();
        m[(1, 2)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(hermitian_eig(&m), Err(Error::NonFinite)));
    }

    #[test]
    fn eig_is_deterministic() {
        let m = Mat4::from_rows([
            [C64::new(0.3, 0.0), C64::new(0.1, 0.2), ZERO, C64::new(-0.4, 0.1)],
            [C64::new(0.1, -0.2), C64::new(-0.2, 0.0), C64::new(0.5, 0.5), ZERO],
            [ZERO, C64::new(0.5, -0.5), C64::new(0.9, 0.0), C64::new(0.0, 0.3)],
            [C64::new(-0.4, -0.1), ZERO, C64::new(0.0, -0.3), C64::new(0.1, 0.0)],
        ]);
        let a = hermitian_eig(&m).unwrap();
        let b = hermitian_eig(&m).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
        assert!(a.reconstruct().max_abs_diff(&m) < EPS_RECON);
    }

    #[test]
    fn sqrt_of_scaled_identity() {
        let r = matrix_sqrt_psd(&Mat4::identity().scale(0.25)).unwrap();
        assert!(r.approx_eq(&Mat4::identity().scale(0.5), 1e-15));
    }

    #[test]
    fn sqrt_of_projector() {
        let p = Mat4::from_real_diag([0.0, 0.0, 0.0, 1.0]);
        assert!(matrix_sqrt_psd(&p).unwrap().approx_eq(&p, 1e-15));
    }

    #[test]
    fn sqrt_rejects_negative() {
        let m = Mat2::from_real_diag([1.0, -1e-6]);
        assert!(matches!(matrix_sqrt_psd(&m), Err(Error::NotPsd { .. })));
        // within tolerance: clamped
        let m = Mat2::from_real_diag([1.0, -1e-13]);
        let r = matrix_sqrt_psd(&m).unwrap();
        assert!(r.approx_eq(&Mat2::from_real_diag([1.0, 0.0]), 1e-15));
    }

    #[test]
    fn trace_norm_examples() {
        let m = Mat4::from_real_diag([1.0, -1.0, 0.0, 0.0]);
        assert!((trace_norm(&m).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(trace_norm(&Mat4::zeros()).unwrap(), 0.0);
        let d = bell_minus() - Mat4::identity().scale(0.25);
        assert!((trace_norm(&d).unwrap() - 1.5).abs() < 1e-13);
    }

    #[test]
    fn trace_norm_of_non_hermitian() {
        // [[0, 2], [0, 0]] has singular values (2, 0)
        let m = Mat2::from_real_rows([[0.0, 2.0], [0.0, 0.0]]);
        assert!((trace_norm(&m).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hs_norm_examples() {
        assert!((hs_norm(&Mat4::identity()) - 2.0).abs() < 1e-15);
        assert!((hs_norm(&kron(&pauli::x(), &pauli::identity())) - 2.0).abs() < 1e-15);
        let m = Mat4::from_real_diag([1.0, -1.0, 0.0, 0.0]);
        assert!((hs_norm(&m) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kron_basis_order() {
        let zi = kron(&pauli::z(), &pauli::identity());
        assert_eq!(zi, Mat4::from_real_diag([1.0, 1.0, -1.0, -1.0]));
        assert_eq!(kron(&Mat2::identity(), &Mat2::identity()), Mat4::identity());
        let p0 = Mat2::from_real_diag([1.0, 0.0]);
        let p1 = Mat2::from_real_diag([0.0, 1.0]);
        assert_eq!(kron(&p0, &p1), Mat4::from_real_diag([0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn exp_examples() {
        let h = Mat4::from_real_diag([2.0, 0.0, 0.0, -2.0]);
        assert!(matrix_exp_hermitian(&h, 0.0).unwrap().approx_eq(&Mat4::identity(), 1e-15));
        let beta = 0.7;
        let b = 1.3;
        let e = matrix_exp_hermitian(&h.scale(b), -beta).unwrap();
        assert!((e[(0, 0)].re - (-2.0 * beta * b).exp()).abs() < 1e-14);
        assert!((e[(3, 3)].re - (2.0 * beta * b).exp()).abs() < 1e-12);
    }

    #[test]
    fn exp_reproduces_cosh_sinh_block() {
        // exp(-β δ' X_θ) for X_θ = [[0, e^{iθ}], [e^{-iθ}, 0]]
        let (beta, delta, theta) = (0.8, 1.7, 0.6);
        let ph = C64::from_polar(1.0, theta);
        let x = Mat2::from_rows([[ZERO, ph], [ph.conj(), ZERO]]);
        let e = matrix_exp_hermitian(&x.scale(delta), -beta).unwrap();
        let (c, s) = ((beta * delta).cosh(), (beta * delta).sinh());
        assert!((e[(0, 0)] - C64::new(c, 0.0)).norm() < 1e-13);
        assert!((e[(0, 1)] + ph * s).norm() < 1e-13);
        assert!((e[(1, 0)] + ph.conj() * s).norm() < 1e-13);
    }

    #[test]
    fn pauli_dot_matches_components() {
        let u = [0.3, -0.4, 0.5];
        let [sx, sy, sz] = pauli::all();
        let m = sx.scale(u[0]) + sy.scale(u[1]) + sz.scale(u[2]);
        assert!(pauli::dot(u).approx_eq(&m, 1e-16));
    }
}
