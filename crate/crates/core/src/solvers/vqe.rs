use serde::{Deserialize, Serialize};

use super::bfgs::{bfgs_minimize, BfgsConfig};
use crate::error::{invalid, Result};
use crate::statevector::{AnsatzCircuit, CompiledAnsatz, SparseOperator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub energy: f64,
    pub theta: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    pub message: Option<String>,
}

impl VqeResult {
    pub fn error_vs(&self, reference: f64) -> f64 {
        self.energy - reference
    }
}

/// Minimizes `⟨Ψ(θ)|H|Ψ(θ)⟩` from `theta0` (all zeros, the HF point, when
/// absent).
pub fn vqe(circuit: &AnsatzCircuit, h: &SparseOperator, theta0: Option<&[f64]>, cfg: &BfgsConfig) -> Result<VqeResult> {
    let compiled = circuit.compile()?;
    vqe_compiled(&compiled, h, theta0, cfg)
}

pub fn vqe_compiled(
    compiled: &CompiledAnsatz,
    h: &SparseOperator,
    theta0: Option<&[f64]>,
    cfg: &BfgsConfig,
) -> Result<VqeResult> {
    let start = match theta0 {
        Some(t) if t.len() != compiled.n_parameters() => {
            return Err(invalid(format!("{} starting parameters for {}", t.len(), compiled.n_parameters())))
        }
        Some(t) => t.to_vec(),
        None => vec![0.0; compiled.n_parameters()],
    };
    let r = bfgs_minimize(|t| compiled.energy_and_gradient(t, h), &start, cfg)?;
    Ok(VqeResult {
        energy: r.value,
        gradient_norm: r.gradient.iter().fold(0.0f64, |m, g| m.max(g.abs())),
        theta: r.x,
        iterations: r.iterations,
        evaluations: r.evaluations,
        converged: r.converged,
        message: r.message,
    })
}
