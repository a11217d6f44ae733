//! Optimizer, VQE, ADAPT-VQE, exact FCI and the correlation decomposition.

pub mod adapt;
pub mod bfgs;
pub mod decomposition;
pub mod fci;
pub mod vqe;

pub use adapt::{adapt_vqe, pool_gradients, AdaptConfig, AdaptIteration, AdaptResult};
pub use bfgs::{bfgs_minimize, BfgsConfig, BfgsResult};
pub use decomposition::{correlation_decomposition, CorrelationDecomposition, CorrelationTerm};
pub use fci::{fci_ground_state, sector_determinants, FciResult};
pub use vqe::{vqe, vqe_compiled, VqeResult};
