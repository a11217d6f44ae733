//! Classical screening of UCCSD excitations by their energy gradients at the
//! Hartree-Fock point, plus everything needed to check the screened ansatz:
//! operator algebra and Jordan-Wigner encoding, FCIDUMP ingestion, a dense
//! statevector simulator with adjoint gradients, BFGS-driven VQE, an ADAPT-VQE
//! baseline, exact FCI, and Jordan-Wigner staircase circuit synthesis.
//!
//! Qubit convention throughout: spin orbital `(p, alpha)` is qubit `2p`,
//! `(p, beta)` is qubit `2p + 1`, and bit `q` of a basis-state index is the
//! occupation of qubit `q`. Jordan-Wigner parity strings run over the qubits
//! below the mode being acted on.

// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod integrals;
pub mod operator;
pub mod pipeline;
pub mod screening;
pub mod solvers;
pub mod statevector;
pub mod synthesis;

pub use error::{GbefError, Result};

/// Chemical accuracy, in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;
