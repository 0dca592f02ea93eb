//! Dense complex linear algebra used by every other module: Hermitian
//! eigendecompositions, null spaces via one-sided Jacobi SVD, and exact
//! matrix exponentials with their parameter derivatives.

mod eig;
mod expm;
mod svd;

pub use eig::{herm_eig, unitary_eig};
pub use expm::{dexpm, expm_skew, logm_unitary, ExpDerivative};
pub use svd::{null_space, svd_jacobi, JacobiSvd};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Dense complex matrix in double precision.
pub type CMat = DMatrix<Complex64>;
/// Dense complex vector.
pub type CVec = nalgebra::DVector<Complex64>;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

/// Numerical tolerances threaded through rank decisions and equality checks.
///
/// `rank_tol` is relative to the largest singular value; `eq_tol` is an
/// absolute elementwise/Frobenius comparison threshold.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerance {
    pub rank_tol: f64,
    pub eq_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            eq_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, eq_tol: f64) -> Self {
        assert!(rank_tol > 0.0 && eq_tol > 0.0, "tolerances must be positive");
        Self { rank_tol, eq_tol }
    }
}

/// Frobenius norm.
pub fn fro_norm(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Trace inner product `Tr(a† b)`.
pub fn trace_dot(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Kronecker product with the first factor as the most significant block.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C_ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Deviation from Hermiticity, `max |A - A†|`.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Deviation from skew-Hermiticity, `max |A + A†|`.
pub fn skew_hermiticity_residual(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] + m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && hermiticity_residual(m) <= tol
}

pub fn is_skew_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && skew_hermiticity_residual(m) <= tol
}

/// Deviation from unitarity, `‖U†U - I‖`.
pub fn unitarity_residual(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    fro_norm(&(m.adjoint() * m - identity(n)))
}

pub fn is_unitary(m: &CMat, tol: f64) -> bool {
    unitarity_residual(m) <= tol
}

pub fn all_finite(m: &CMat) -> bool {
    m.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Distance between two matrices up to a global phase: minimizes
/// `‖a - e^{iγ} b‖` over γ.
pub fn phase_insensitive_distance(a: &CMat, b: &CMat) -> f64 {
    let overlap = trace_dot(b, a);
    let phase = if overlap.norm() < 1e-300 {
        C_ONE
    } else {
        overlap / overlap.norm()
    };
    fro_norm(&(a - b * phase))
}

/// Largest absolute entry difference.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
