//! Construction of symmetry-respecting "horizontal" quantum gates from
//! homogeneous-space decompositions of Lie algebras, together with a dense
//! statevector VQE simulator with exact analytic gradients.

pub mod catalog;
pub mod error;
pub mod gates;
pub mod kernel;
pub mod lie;
pub mod pauli;
pub mod sim;
pub mod symmetric;
pub mod vqe;

pub use error::{Error, Result};
