use super::eig::{herm_eig, unitary_eig};
use super::{skew_hermiticity_residual, CMat, C_I};
use crate::error::{Error, Result};
use nalgebra::DVector;
use num_complex::Complex64;
use std::f64::consts::PI;

const EQ_TOL: f64 = 1e-9;

/// Exact unitary exponential of a skew-Hermitian matrix, computed through the
/// Hermitian eigendecomposition of `-iA`.
pub fn expm_skew(a: &CMat) -> Result<CMat> {
    Ok(ExpDerivative::new(a)?.unitary)
}

/// Principal matrix logarithm of a unitary, with the global phase removed by
/// dividing out `det(U)^{1/N}` first. Eigenphases land in `(-π, π]`; phases
/// within `EQ_TOL` of the cut are rejected as ambiguous.
pub fn logm_unitary(u: &CMat) -> Result<CMat> {
    let n = u.nrows();
    let det = u.clone().determinant();
    let alpha = det.im.atan2(det.re) / n as f64;
    let normalized = u.map(|c| c * Complex64::from_polar(1.0, -alpha));

    let (phases, vectors) = unitary_eig(&normalized, EQ_TOL)?;
    for &phi in phases.iter() {
        if (phi.abs() - PI).abs() < EQ_TOL {
            return Err(Error::BranchAmbiguity {
                phase: phi,
                tol: EQ_TOL,
            });
        }
    }
    let lam = CMat::from_diagonal(&DVector::from_iterator(
        n,
        phases.iter().map(|&p| Complex64::new(0.0, p)),
    ));
    let log = &vectors * lam * vectors.adjoint();
    // exact skew-Hermitian up to rounding; symmetrize
    Ok((&log - log.adjoint()).scale(0.5))
}

/// Directional derivative of the exponential map at `A` along `dA`:
/// `d/dt exp(A + t dA)` at `t = 0` (Daleckii–Krein formula in the eigenbasis
/// of `-iA`).
pub fn dexpm(a: &CMat, da: &CMat) -> Result<CMat> {
    if a.shape() != da.shape() {
        return Err(Error::ShapeMismatch {
            expected_rows: a.nrows(),
            expected_cols: a.ncols(),
            rows: da.nrows(),
            cols: da.ncols(),
        });
    }
    Ok(ExpDerivative::new(a)?.directional(da))
}

/// Shared eigendecomposition of a skew-Hermitian generator, reused for the
/// exponential and any number of directional derivatives or effective
/// generators. This is what makes multi-parameter gate gradients cheap: one
/// factorization per gate, one Hadamard product per parameter.
pub struct ExpDerivative {
    eigenphases: DVector<f64>,
    vectors: CMat,
    pub unitary: CMat,
}

impl ExpDerivative {
    pub fn new(a: &CMat) -> Result<Self> {
        let residual = skew_hermiticity_residual(a);
        if !a.is_square() || residual > EQ_TOL {
            return Err(Error::NotSkewHermitian {
                residual,
                tol: EQ_TOL,
            });
        }
        let h = a.map(|c| c * (-C_I));
        let (eigenphases, vectors) = herm_eig(&h, EQ_TOL)?;
        let n = a.nrows();
        let lam = CMat::from_diagonal(&DVector::from_iterator(
            n,
            eigenphases.iter().map(|&p| Complex64::from_polar(1.0, p)),
        ));
        let unitary = &vectors * lam * vectors.adjoint();
        Ok(Self {
            eigenphases,
            vectors,
            unitary,
        })
    }

    /// `d/dt exp(A + t dA)|_{t=0}`.
    pub fn directional(&self, da: &CMat) -> CMat {
        let n = self.eigenphases.len();
        let mut w = self.vectors.adjoint() * da * &self.vectors;
        for p in 0..n {
            for q in 0..n {
                let mean = 0.5 * (self.eigenphases[p] + self.eigenphases[q]);
                let half_diff = 0.5 * (self.eigenphases[p] - self.eigenphases[q]);
                let factor = Complex64::from_polar(1.0, mean) * sinc(half_diff);
                w[(p, q)] *= factor;
            }
        }
        &self.vectors * w * self.vectors.adjoint()
    }

    /// Effective generator `Ω = U† · d/dt exp(A + t dA)`, the algebra element
    /// with `∂ exp(A) = U Ω` along the direction `dA`.
    pub fn effective_generator(&self, da: &CMat) -> CMat {
        self.unitary.adjoint() * self.directional(da)
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    }
}
