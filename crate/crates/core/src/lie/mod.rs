//! Lie-algebra bookkeeping over explicit matrix representations: orthonormal
//! algebra bases, coordinate subspaces, orthogonal complements, commutants,
//! centers, the four-subspace decomposition, and Cartan subalgebras.

mod dla;
mod ops;

pub use dla::generate_dla;
pub use ops::{
    cartan_subalgebra, cartan_subalgebra_seeded, center, commutant, full_decomposition,
    horizontal_complement, is_ad_invariant, AdInvarianceReport,
};

use crate::error::{Error, Result};
use crate::kernel::{self, fro_norm, null_space, trace_dot, CMat, Tolerance};
use crate::pauli::{format_pauli_combination, PauliString};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::sync::Arc;

/// Ordered orthonormal basis of skew-Hermitian matrices spanning a Lie
/// algebra, orthonormal under the trace inner product `Tr(A†B)`.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    matrix_dim: usize,
    elements: Vec<CMat>,
    labels: Vec<String>,
}

impl AlgebraBasis {
    /// Builds a basis from already-orthonormal skew-Hermitian elements,
    /// verifying both properties.
    pub fn new(elements: Vec<CMat>, tol: &Tolerance) -> Result<Self> {
        assert!(!elements.is_empty(), "an algebra basis cannot be empty");
        let matrix_dim = elements[0].nrows();
        for e in &elements {
            let residual = kernel::skew_hermiticity_residual(e);
            if e.nrows() != matrix_dim || !e.is_square() {
                return Err(Error::ShapeMismatch {
                    expected_rows: matrix_dim,
                    expected_cols: matrix_dim,
                    rows: e.nrows(),
                    cols: e.ncols(),
                });
            }
            if residual > tol.eq_tol {
                return Err(Error::NotSkewHermitian {
                    residual,
                    tol: tol.eq_tol,
                });
            }
        }
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let g = trace_dot(a, b);
                let expect = if i == j { 1.0 } else { 0.0 };
                if (g - Complex64::new(expect, 0.0)).norm() > tol.eq_tol {
                    return Err(Error::Parse(format!(
                        "basis Gram matrix deviates from identity at ({i}, {j}) by {:.3e}",
                        (g - Complex64::new(expect, 0.0)).norm()
                    )));
                }
            }
        }
        let labels = elements.iter().map(|e| auto_label(e)).collect();
        Ok(Self {
            matrix_dim,
            elements,
            labels,
        })
    }

    /// Orthonormalizes a spanning set (modified Gram-Schmidt with
    /// re-orthogonalization), dropping dependent directions.
    pub fn from_span(span: &[CMat], tol: &Tolerance) -> Result<Self> {
        let ortho = orthonormalize_matrices(span, tol);
        if ortho.is_empty() {
            return Err(Error::EmptySubspace);
        }
        Self::new(ortho, tol)
    }

    /// The normalized Pauli basis of su(2^n): all non-identity Pauli strings
    /// `i P / sqrt(2^n)`, ordered lexicographically with I < X < Y < Z.
    pub fn su(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let norm = 1.0 / (dim as f64).sqrt();
        let count = 4usize.pow(n_qubits as u32);
        let mut elements = Vec::with_capacity(count - 1);
        let mut labels = Vec::with_capacity(count - 1);
        for code in 1..count {
            let string = pauli_from_code(code, n_qubits);
            let m = string
                .matrix()
                .map(|c| c * Complex64::new(0.0, norm));
            elements.push(m);
            labels.push(format!("i{}/{}", string, format_norm(dim)));
        }
        Self {
            matrix_dim: dim,
            elements,
            labels,
        }
    }

    /// so(4) as real antisymmetric 4x4 matrices, spanned by the six Pauli
    /// strings `i{IY, YI, XY, YX, YZ, ZY}/2`.
    pub fn so4() -> Self {
        let words = ["IY", "YI", "XY", "YX", "YZ", "ZY"];
        let elements = words
            .iter()
            .map(|w| {
                PauliString::parse(w)
                    .unwrap()
                    .matrix()
                    .map(|c| c * Complex64::new(0.0, 0.5))
            })
            .collect();
        let labels = words.iter().map(|w| format!("i{w}/2")).collect();
        Self {
            matrix_dim: 4,
            elements,
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix_dim(&self) -> usize {
        self.matrix_dim
    }

    pub fn element(&self, j: usize) -> &CMat {
        &self.elements[j]
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.elements.len());
        self.labels = labels;
    }

    /// Realizes a coordinate vector as a matrix, `Σ_j a_j X_j`.
    pub fn realize(&self, coords: &DVector<f64>) -> CMat {
        assert_eq!(coords.len(), self.dim());
        let mut out = CMat::zeros(self.matrix_dim, self.matrix_dim);
        for (j, e) in self.elements.iter().enumerate() {
            if coords[j] != 0.0 {
                out += e.map(|c| c * Complex64::new(coords[j], 0.0));
            }
        }
        out
    }

    /// Coordinates `a_j = Tr(X_j† X)` together with the residual
    /// `‖X - Σ a_j X_j‖`. Membership in the (real) span holds exactly when
    /// the residual is below `eq_tol`.
    pub fn expand(&self, x: &CMat) -> Result<(DVector<f64>, f64)> {
        if x.nrows() != self.matrix_dim || x.ncols() != self.matrix_dim {
            return Err(Error::DimensionMismatch {
                expected: self.matrix_dim,
                got: x.nrows(),
            });
        }
        let coords = DVector::from_iterator(
            self.dim(),
            self.elements.iter().map(|e| trace_dot(e, x).re),
        );
        let residual = fro_norm(&(x - self.realize(&coords)));
        Ok((coords, residual))
    }
}

fn format_norm(dim: usize) -> String {
    let sqrt = (dim as f64).sqrt();
    if sqrt.fract() == 0.0 {
        format!("{}", sqrt as usize)
    } else {
        format!("sqrt({dim})")
    }
}

fn pauli_from_code(code: usize, n_qubits: usize) -> PauliString {
    use crate::pauli::PauliLetter::*;
    let mut letters = Vec::with_capacity(n_qubits);
    for k in 0..n_qubits {
        let digit = (code / 4usize.pow((n_qubits - 1 - k) as u32)) % 4;
        letters.push(match digit {
            0 => I,
            1 => X,
            2 => Y,
            3 => Z,
            _ => unreachable!(),
        });
    }
    PauliString::new(letters)
}

/// Best-effort label: expand a skew-Hermitian matrix over Pauli words when the
/// dimension is a power of two, otherwise a placeholder.
pub fn auto_label(m: &CMat) -> String {
    let dim = m.nrows();
    if !dim.is_power_of_two() || dim < 2 {
        return "<matrix>".into();
    }
    let n_qubits = dim.trailing_zeros() as usize;
    let mut terms = Vec::new();
    for code in 1..4usize.pow(n_qubits as u32) {
        let string = pauli_from_code(code, n_qubits);
        // coefficient of iP in m: Tr((iP)† m)/dim = -i Tr(P m)/dim
        let c = trace_dot(&string.matrix().map(|v| v * Complex64::new(0.0, 1.0)), m).re
            / dim as f64;
        if c.abs() > 1e-9 {
            terms.push((c, string.to_string()));
        }
    }
    format_pauli_combination(&terms)
}

/// Orthonormalize a list of matrices under the trace inner product, dropping
/// near-dependent directions at `rank_tol` (relative to the largest input
/// norm).
pub fn orthonormalize_matrices(span: &[CMat], tol: &Tolerance) -> Vec<CMat> {
    let scale = span.iter().map(fro_norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut out: Vec<CMat> = Vec::new();
    for candidate in span {
        let mut v = candidate.clone();
        for _ in 0..2 {
            for b in &out {
                let overlap = trace_dot(b, &v);
                v -= b.map(|c| c * overlap);
            }
        }
        let norm = fro_norm(&v);
        if norm > tol.rank_tol.max(1e-12) * scale {
            out.push(v.map(|c| c / Complex64::new(norm, 0.0)));
        }
    }
    out
}

/// A subspace of an ambient algebra, stored as orthonormal coordinate rows
/// relative to the ambient basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: Arc<AlgebraBasis>,
    coords: DMatrix<f64>,
}

impl Subspace {
    /// Wraps pre-orthonormalized coordinate rows.
    pub fn from_coord_rows(
        ambient: Arc<AlgebraBasis>,
        coords: DMatrix<f64>,
        tol: &Tolerance,
    ) -> Result<Self> {
        assert_eq!(coords.ncols(), ambient.dim());
        let gram = &coords * coords.transpose();
        let dim = coords.nrows();
        for i in 0..dim {
            for j in 0..dim {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (gram[(i, j)] - expect).abs() > tol.eq_tol {
                    return Err(Error::Parse(format!(
                        "subspace rows are not orthonormal: Gram({i},{j}) off by {:.3e}",
                        (gram[(i, j)] - expect).abs()
                    )));
                }
            }
        }
        Ok(Self { ambient, coords })
    }

    /// Builds a subspace from spanning matrices: each must lie in the ambient
    /// algebra (expansion residual below `eq_tol`); rows are orthonormalized.
    pub fn from_span_matrices(
        ambient: Arc<AlgebraBasis>,
        span: &[CMat],
        tol: &Tolerance,
    ) -> Result<Self> {
        let mut rows: Vec<DVector<f64>> = Vec::new();
        for m in span {
            let (coords, residual) = ambient.expand(m)?;
            let norm = fro_norm(m);
            if residual > tol.eq_tol * norm.max(1.0) {
                return Err(Error::Parse(format!(
                    "spanning matrix leaves the ambient algebra (residual {residual:.3e})"
                )));
            }
            rows.push(coords);
        }
        let ortho = orthonormalize_rows(&rows, tol);
        let coords = rows_to_matrix(&ortho, ambient.dim());
        Self::from_coord_rows(ambient, coords, tol)
    }

    /// The whole ambient algebra as a subspace of itself.
    pub fn full(ambient: Arc<AlgebraBasis>) -> Self {
        let coords = DMatrix::identity(ambient.dim(), ambient.dim());
        Self { ambient, coords }
    }

    pub fn ambient(&self) -> &Arc<AlgebraBasis> {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.coords.nrows()
    }

    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    /// Realizes basis vector `j` of the subspace as a matrix.
    pub fn basis_matrix(&self, j: usize) -> CMat {
        self.ambient.realize(&self.coords.row(j).transpose())
    }

    pub fn basis_matrices(&self) -> Vec<CMat> {
        (0..self.dim()).map(|j| self.basis_matrix(j)).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim())
            .map(|j| auto_label(&self.basis_matrix(j)))
            .collect()
    }

    /// Splits an ambient coordinate vector into its component inside the
    /// subspace and the norm of what is left outside.
    pub fn project(&self, ambient_coords: &DVector<f64>) -> (DVector<f64>, f64) {
        let inside = &self.coords * ambient_coords;
        let reconstructed = self.coords.transpose() * &inside;
        let outside = (ambient_coords - reconstructed).norm();
        (inside, outside)
    }

    /// Membership test for a matrix: expansion residual in the ambient basis
    /// plus out-of-subspace coordinate residual.
    pub fn contains(&self, x: &CMat, tol: &Tolerance) -> Result<(bool, f64)> {
        let (coords, expand_residual) = self.ambient.expand(x)?;
        let (_, outside) = self.project(&coords);
        let total = (expand_residual.powi(2) + outside.powi(2)).sqrt();
        Ok((total <= tol.eq_tol * fro_norm(x).max(1.0), total))
    }

    /// Mutual span-equality test: worst projection residual of either basis
    /// onto the other subspace.
    pub fn span_distance(&self, other: &Subspace) -> f64 {
        let mut worst: f64 = 0.0;
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        for j in 0..self.dim() {
            let row = self.coords.row(j).transpose();
            let (_, outside) = other.project(&row);
            worst = worst.max(outside);
        }
        for j in 0..other.dim() {
            let row = other.coords.row(j).transpose();
            let (_, outside) = self.project(&row);
            worst = worst.max(outside);
        }
        worst
    }

    /// Verifies closure under the commutator; returns the worst residual or
    /// the offending pair.
    pub fn verify_subalgebra(&self, tol: &Tolerance) -> Result<f64> {
        let mats = self.basis_matrices();
        let mut worst: f64 = 0.0;
        for i in 0..mats.len() {
            for j in (i + 1)..mats.len() {
                let comm = kernel::commutator(&mats[i], &mats[j]);
                let (coords, expand_res) = self.ambient.expand(&comm)?;
                let (_, outside) = self.project(&coords);
                let residual = (expand_res.powi(2) + outside.powi(2)).sqrt();
                if residual > tol.eq_tol * 10.0_f64.max(fro_norm(&comm)) {
                    return Err(Error::NotSubalgebra { i, j, residual });
                }
                worst = worst.max(residual);
            }
        }
        Ok(worst)
    }

    /// Worst residual of `[a, b]` outside `target`, over all basis pairs of
    /// `self` x `other`.
    pub fn commutator_residual(&self, other: &Subspace, target: &Subspace) -> f64 {
        let left = self.basis_matrices();
        let right = other.basis_matrices();
        let mut worst: f64 = 0.0;
        for a in &left {
            for b in &right {
                let comm = kernel::commutator(a, b);
                let (coords, expand_res) = self
                    .ambient
                    .expand(&comm)
                    .expect("commutator has ambient shape");
                let (_, outside) = target.project(&coords);
                worst = worst.max((expand_res.powi(2) + outside.powi(2)).sqrt());
            }
        }
        worst
    }
}

pub(crate) fn orthonormalize_rows(rows: &[DVector<f64>], tol: &Tolerance) -> Vec<DVector<f64>> {
    let scale = rows.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let mut out: Vec<DVector<f64>> = Vec::new();
    if scale == 0.0 {
        return out;
    }
    for candidate in rows {
        let mut v = candidate.clone();
        for _ in 0..2 {
            for b in &out {
                let overlap = b.dot(&v);
                v -= b * overlap;
            }
        }
        let norm = v.norm();
        if norm > tol.rank_tol.max(1e-12) * scale {
            out.push(v / norm);
        }
    }
    out
}

pub(crate) fn rows_to_matrix(rows: &[DVector<f64>], width: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows.len(), width);
    for (i, r) in rows.iter().enumerate() {
        m.set_row(i, &r.transpose());
    }
    m
}

/// Kernel of a real coefficient matrix, as real orthonormal rows.
pub(crate) fn real_null_space(m: &DMatrix<f64>, tol: &Tolerance) -> DMatrix<f64> {
    let complex = CMat::from_iterator(
        m.nrows(),
        m.ncols(),
        m.iter().map(|&v| Complex64::new(v, 0.0)),
    );
    let basis = null_space(&complex, tol);
    let mut out = DMatrix::zeros(basis.len(), m.ncols());
    for (i, v) in basis.iter().enumerate() {
        for j in 0..m.ncols() {
            debug_assert!(v[j].im.abs() < 1e-12);
            out[(i, j)] = v[j].re;
        }
    }
    out
}

/// The four-subspace split of an algebra with respect to a symmetry
/// subalgebra: `g = r ⊕ g^k_o ⊕ z(k) ⊕ k_o`, with the horizontal space
/// `m = r ⊕ g^k_o` and the vertical space `k = z(k) ⊕ k_o`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub r: Subspace,
    pub gk_o: Subspace,
    pub z_k: Subspace,
    pub k_o: Subspace,
    /// Horizontal space `m = k^⊥`.
    pub m: Subspace,
    /// Commutant `g^k`.
    pub gk: Subspace,
    /// The input vertical space `k`.
    pub k: Subspace,
    /// Worst closure/commutation residuals seen while verifying.
    pub verification: DecompositionReport,
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct DecompositionReport {
    pub kk_closure: f64,
    pub km_into_m: f64,
    pub orthogonality: f64,
}

impl Decomposition {
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (
            self.r.dim(),
            self.gk_o.dim(),
            self.z_k.dim(),
            self.k_o.dim(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::C_I;

    fn su2() -> Arc<AlgebraBasis> {
        Arc::new(AlgebraBasis::su(1))
    }

    #[test]
    fn pauli_basis_is_orthonormal() {
        let tol = Tolerance::default();
        for n in 1..=2 {
            let basis = AlgebraBasis::su(n);
            assert_eq!(basis.dim(), 4usize.pow(n as u32) - 1);
            AlgebraBasis::new(basis.elements().to_vec(), &tol).unwrap();
        }
        AlgebraBasis::new(AlgebraBasis::so4().elements().to_vec(), &tol).unwrap();
    }

    #[test]
    fn expand_recovers_membership() {
        let g = AlgebraBasis::su(2);
        // i(XI + IX) has support on exactly two basis words with residual 0
        let xi = PauliString::parse("XI").unwrap().matrix();
        let ix = PauliString::parse("IX").unwrap().matrix();
        let x = (xi + ix).map(|c| c * C_I);
        let (coords, residual) = g.expand(&x).unwrap();
        assert!(residual < 1e-12);
        let nonzero: Vec<usize> = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c.abs() > 1e-12)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(nonzero.len(), 2);

        // SWAP minus its trace part expands on {XX, YY, ZZ}
        let swap = CMat::from_row_slice(
            4,
            4,
            &[
                1.0.into(),
                0.0.into(),
                0.0.into(),
                0.0.into(),
                0.0.into(),
                0.0.into(),
                1.0.into(),
                0.0.into(),
                0.0.into(),
                1.0.into(),
                0.0.into(),
                0.0.into(),
                0.0.into(),
                0.0.into(),
                0.0.into(),
                1.0.into(),
            ],
        );
        let traceless = &swap - CMat::identity(4, 4).scale(0.5);
        // multiply by i to land in the skew-Hermitian span
        let skew = traceless.map(|c| c * C_I);
        let (coords, residual) = g.expand(&skew).unwrap();
        assert!(residual < 1e-12);
        let labels: Vec<&str> = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c.abs() > 1e-12)
            .map(|(i, _)| g.labels()[i].as_str())
            .collect();
        assert_eq!(labels.len(), 3);
        for l in labels {
            assert!(l.contains("XX") || l.contains("YY") || l.contains("ZZ"));
        }

        // a non-member flags a nonzero residual
        let mut nonmember = CMat::zeros(4, 4);
        nonmember[(0, 0)] = 1.0.into();
        let (_, residual) = g.expand(&nonmember).unwrap();
        assert!(residual > 0.1);
    }

    #[test]
    fn subspace_projection_splits_norm() {
        let tol = Tolerance::default();
        let g = su2();
        let z = PauliString::parse("Z").unwrap().matrix().map(|c| c * C_I);
        let k = Subspace::from_span_matrices(g.clone(), &[z], &tol).unwrap();
        assert_eq!(k.dim(), 1);
        let x = PauliString::parse("X").unwrap().matrix().map(|c| c * C_I);
        let (coords, _) = g.expand(&x).unwrap();
        let (inside, outside) = k.project(&coords);
        assert!(inside.norm() < 1e-12);
        assert!((outside - coords.norm()).abs() < 1e-12);
    }

    #[test]
    fn subalgebra_verification_catches_open_spans() {
        let tol = Tolerance::default();
        let g = su2();
        let x = PauliString::parse("X").unwrap().matrix().map(|c| c * C_I);
        let y = PauliString::parse("Y").unwrap().matrix().map(|c| c * C_I);
        let not_closed = Subspace::from_span_matrices(g.clone(), &[x, y], &tol).unwrap();
        assert!(matches!(
            not_closed.verify_subalgebra(&tol),
            Err(Error::NotSubalgebra { .. })
        ));
        let full = Subspace::full(g);
        assert!(full.verify_subalgebra(&tol).unwrap() < 1e-12);
    }

    #[test]
    fn labels_render_pauli_words() {
        let g = AlgebraBasis::su(1);
        assert_eq!(g.labels()[0], "iX/sqrt(2)");
    }
}
