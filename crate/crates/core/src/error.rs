use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {residual:.3e} exceeds tolerance {tol:.3e})")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not skew-Hermitian (residual {residual:.3e} exceeds tolerance {tol:.3e})")]
    NotSkewHermitian { residual: f64, tol: f64 },

    #[error("matrix is not unitary (residual {residual:.3e} exceeds tolerance {tol:.3e})")]
    NonUnitary { residual: f64, tol: f64 },

    #[error("matrix logarithm is ambiguous: eigenphase {phase:.6} lies within {tol:.3e} of the branch cut at pi")]
    BranchAmbiguity { phase: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("subspace is not a subalgebra: commutator of basis elements {i} and {j} leaves the span (residual {residual:.3e})")]
    NotSubalgebra { i: usize, j: usize, residual: f64 },

    #[error("subspace is empty")]
    EmptySubspace,

    #[error("map is not an involution: residual {residual:.3e} on basis element {index}")]
    NotInvolutive { index: usize, residual: f64 },

    #[error("map is not an automorphism: commutator check failed on basis pair ({i}, {j}) with residual {residual:.3e}")]
    NotAutomorphism { i: usize, j: usize, residual: f64 },

    #[error("invalid block dimensions: {0}")]
    BadDims(String),

    #[error("unknown space id `{0}`")]
    UnknownSpace(String),

    #[error("parameter vector has length {got}, gate expects {expected}")]
    ParamLengthMismatch { expected: usize, got: usize },

    #[error("symmetry element leaks out of the horizontal subspace (residual {residual:.3e} exceeds tolerance {tol:.3e})")]
    SymmetryLeakage { residual: f64, tol: f64 },

    #[error("qubit index {qubit} out of range for {n_qubits} qubits")]
    QubitRange { qubit: usize, n_qubits: usize },

    #[error("bell-product initial states need an even qubit count, got {0}")]
    OddQubits(usize),

    #[error("hamiltonian needs at least 2 qubits, got {0}")]
    TooFewQubits(usize),

    #[error("spectrum is degenerate: E_max - E_min = {width:.3e}")]
    DegenerateSpectrum { width: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
