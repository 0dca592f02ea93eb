//! Classical symmetric-space involutions and the eigenspace machinery that
//! produces Cartan decompositions `g = k ⊕ m` from an involution.

use crate::error::{Error, Result};
use crate::kernel::{fro_norm, identity, max_abs_diff, CMat, Tolerance, C_ONE};
use crate::lie::{
    cartan_subalgebra, cartan_subalgebra_seeded, real_null_space, AlgebraBasis, Subspace,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

/// Structure matrices of the classical involutions: `I_{p,q}`, `J_n`,
/// and `K_{p,q}` in 2x2 block layout.
pub fn structure_matrix_ipq(p: usize, q: usize) -> Result<CMat> {
    if p == 0 || q == 0 {
        return Err(Error::BadDims(format!("I_{{p,q}} needs p, q >= 1, got ({p}, {q})")));
    }
    let n = p + q;
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = if i < p { -C_ONE } else { C_ONE };
    }
    Ok(m)
}

pub fn structure_matrix_jn(n: usize) -> Result<CMat> {
    if n == 0 {
        return Err(Error::BadDims("J_n needs n >= 1".into()));
    }
    let mut m = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = C_ONE;
        m[(n + i, i)] = -C_ONE;
    }
    Ok(m)
}

pub fn structure_matrix_kpq(p: usize, q: usize) -> Result<CMat> {
    if p == 0 || q == 0 {
        return Err(Error::BadDims(format!("K_{{p,q}} needs p, q >= 1, got ({p}, {q})")));
    }
    let n = p + q;
    let mut m = CMat::zeros(2 * n, 2 * n);
    for block in 0..2 {
        for i in 0..n {
            let idx = block * n + i;
            m[(idx, idx)] = if i < p { -C_ONE } else { C_ONE };
        }
    }
    Ok(m)
}

/// Entry-wise operation applied before conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EntryOp {
    /// φ acts on A directly.
    None,
    /// φ acts on the complex conjugate A*.
    Conjugate,
    /// φ acts on the transpose Aᵀ.
    Transpose,
}

/// An involutive automorphism `φ(A) = sign · M · op(A) · M†` of a matrix Lie
/// algebra. All classical types reduce to this form.
#[derive(Debug, Clone)]
pub struct Involution {
    pub kind: String,
    conjugator: CMat,
    entry_op: EntryOp,
    sign: f64,
}

impl Involution {
    pub fn custom(kind: &str, conjugator: CMat, entry_op: EntryOp, sign: f64) -> Self {
        Self {
            kind: kind.to_string(),
            conjugator,
            entry_op,
            sign,
        }
    }

    /// Type AI on su(N): `φ(A) = A*`, fixing so(N).
    pub fn type_ai(n: usize) -> Self {
        Self::custom("AI", identity(n), EntryOp::Conjugate, 1.0)
    }

    /// Type AII on su(2N): `φ(A) = J_N A* J_Nᵀ`, fixing sp(N).
    pub fn type_aii(n: usize) -> Result<Self> {
        let j = structure_matrix_jn(n)?;
        // J A* Jᵀ = J A* J† since J is real orthogonal
        Ok(Self::custom("AII", j, EntryOp::Conjugate, 1.0))
    }

    /// Type AIII on su(p+q): `φ(A) = I_{p,q} A I_{p,q}`, fixing s(u(p)⊕u(q)).
    pub fn type_aiii(p: usize, q: usize) -> Result<Self> {
        Ok(Self::custom(
            &format!("AIII:p={p},q={q}"),
            structure_matrix_ipq(p, q)?,
            EntryOp::None,
            1.0,
        ))
    }

    /// Type BDI on so(p+q): same conjugation as AIII, fixing so(p)⊕so(q).
    pub fn type_bdi(p: usize, q: usize) -> Result<Self> {
        Ok(Self::custom(
            &format!("BDI:p={p},q={q}"),
            structure_matrix_ipq(p, q)?,
            EntryOp::None,
            1.0,
        ))
    }

    /// Type CI on sp(N): `φ(A) = A*`, fixing u(N).
    pub fn type_ci(n: usize) -> Self {
        Self::custom("CI", identity(2 * n), EntryOp::Conjugate, 1.0)
    }

    /// Type CII on sp(p+q): `φ(A) = K_{p,q} A K_{p,q}`.
    pub fn type_cii(p: usize, q: usize) -> Result<Self> {
        Ok(Self::custom(
            &format!("CII:p={p},q={q}"),
            structure_matrix_kpq(p, q)?,
            EntryOp::None,
            1.0,
        ))
    }

    /// Type DIII on so(2N): `φ(A) = J_N A J_Nᵀ`, fixing u(N).
    pub fn type_diii(n: usize) -> Result<Self> {
        Ok(Self::custom("DIII", structure_matrix_jn(n)?, EntryOp::None, 1.0))
    }

    pub fn matrix_dim(&self) -> usize {
        self.conjugator.nrows()
    }

    /// Applies the involution to a matrix.
    pub fn apply(&self, a: &CMat) -> Result<CMat> {
        let n = self.matrix_dim();
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::ShapeMismatch {
                expected_rows: n,
                expected_cols: n,
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        let inner = match self.entry_op {
            EntryOp::None => a.clone(),
            EntryOp::Conjugate => a.map(|c| c.conj()),
            EntryOp::Transpose => a.transpose(),
        };
        let out = &self.conjugator * inner * self.conjugator.adjoint();
        Ok(out.map(|c| c * Complex64::new(self.sign, 0.0)))
    }

    /// Verifies φ² = id and the automorphism property on every basis pair of
    /// `g`, and that φ maps `g` into itself.
    pub fn verify_on(&self, g: &AlgebraBasis, tol: &Tolerance) -> Result<()> {
        for (i, x) in g.elements().iter().enumerate() {
            let fx = self.apply(x)?;
            let (_, residual) = g.expand(&fx)?;
            if residual > tol.eq_tol * 10.0 {
                return Err(Error::NotAutomorphism {
                    i,
                    j: i,
                    residual,
                });
            }
            let ffx = self.apply(&fx)?;
            let involutive_residual = max_abs_diff(&ffx, x);
            if involutive_residual > tol.eq_tol * 10.0 {
                return Err(Error::NotInvolutive {
                    index: i,
                    residual: involutive_residual,
                });
            }
        }
        for (i, x) in g.elements().iter().enumerate() {
            for (j, y) in g.elements().iter().enumerate().skip(i + 1) {
                let lhs = self.apply(&crate::kernel::commutator(x, y))?;
                let rhs = crate::kernel::commutator(&self.apply(x)?, &self.apply(y)?);
                let residual = fro_norm(&(lhs - rhs));
                if residual > tol.eq_tol * 100.0 {
                    return Err(Error::NotAutomorphism { i, j, residual });
                }
            }
        }
        Ok(())
    }
}

/// A Cartan decomposition `g = k ⊕ m` with a Cartan subalgebra `h ⊆ m`.
#[derive(Debug, Clone)]
pub struct CartanDecomposition {
    pub k: Subspace,
    pub m: Subspace,
    pub h: Subspace,
    pub report: SymmetricReport,
}

/// Worst-case commutator residuals for the three symmetric-pair inclusions.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SymmetricReport {
    pub kk_residual: f64,
    pub km_residual: f64,
    pub mm_residual: f64,
}

/// Residuals of `[k,k] ⊆ k`, `[k,m] ⊆ m`, and `[m,m] ⊆ k`.
pub fn verify_symmetric(k: &Subspace, m: &Subspace) -> SymmetricReport {
    SymmetricReport {
        kk_residual: k.commutator_residual(k, k),
        km_residual: k.commutator_residual(m, m),
        mm_residual: m.commutator_residual(m, k),
    }
}

/// Splits `g` into the ±1 eigenspaces of a verified involution and attaches a
/// Cartan subalgebra of the −1 eigenspace.
pub fn split_by_involution(
    g: &Arc<AlgebraBasis>,
    phi: &Involution,
    cartan_seed: Option<&CMat>,
    tol: &Tolerance,
) -> Result<CartanDecomposition> {
    phi.verify_on(g, tol)?;

    let dim = g.dim();
    let mut phi_matrix = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        let fx = phi.apply(g.element(i))?;
        let (coords, _) = g.expand(&fx)?;
        phi_matrix.set_column(i, &coords);
    }

    let minus_id = &phi_matrix - DMatrix::identity(dim, dim);
    let plus_id = &phi_matrix + DMatrix::identity(dim, dim);
    let k_rows = real_null_space(&minus_id, tol);
    let m_rows = real_null_space(&plus_id, tol);
    if k_rows.nrows() + m_rows.nrows() != dim {
        return Err(Error::Parse(format!(
            "eigenspaces of the involution span {} of {dim} dimensions",
            k_rows.nrows() + m_rows.nrows()
        )));
    }
    let k = Subspace::from_coord_rows(g.clone(), k_rows, tol)?;
    let m = Subspace::from_coord_rows(g.clone(), m_rows, tol)?;

    let h = match cartan_seed {
        Some(seed) => cartan_subalgebra_seeded(&m, seed, tol)?,
        None => cartan_subalgebra(&m, &[0], tol)?,
    };
    let report = verify_symmetric(&k, &m);
    Ok(CartanDecomposition { k, m, h, report })
}
