//! ADAPT-VQE over a pool of spin-adapted groups.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bfgs::BfgsConfig;
use super::vqe::vqe_compiled;
use crate::error::{invalid, Result};
use crate::operator::ParameterGroup;
use crate::statevector::{AnsatzBlock, AnsatzCircuit, CompiledExcitation, SparseOperator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptConfig {
    /// Stop once the L2 norm of pool gradients falls below this.
    pub epsilon: f64,
    pub max_iterations: usize,
    pub bfgs: BfgsConfig,
}

impl AdaptConfig {
    /// `ε = 10^{−m}`.
    pub fn with_exponent(m: u32) -> Self {
        Self { epsilon: 10f64.powi(-(m as i32)), ..Self::default() }
    }
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self { epsilon: 1e-2, max_iterations: 200, bfgs: BfgsConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptIteration {
    pub selected_group: usize,
    /// Pool gradient norm that triggered this growth step.
    pub gradient_norm: f64,
    pub max_gradient: f64,
    pub energy: f64,
    pub n_parameters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptResult {
    pub epsilon: f64,
    pub iterations: Vec<AdaptIteration>,
    pub energy: f64,
    pub theta: Vec<f64>,
    pub circuit: AnsatzCircuit,
    /// Pool gradient norm at the final state.
    pub final_gradient_norm: f64,
    pub converged: bool,
    pub warning: Option<String>,
}

impl AdaptResult {
    pub fn n_parameters(&self) -> usize {
        self.theta.len()
    }
}

struct PoolEntry {
    id: usize,
    members: Vec<(CompiledExcitation, f64)>,
}

impl PoolEntry {
    /// `⟨ψ|[H, G]|ψ⟩ = 2 Re ⟨Hψ|Gψ⟩`.
    fn gradient(&self, psi: &[Complex64], h_psi: &[Complex64]) -> f64 {
        let mut g = 0.0;
        for (a, w) in &self.members {
            let a_psi = a.apply(psi);
            g += w * 2.0 * h_psi.iter().zip(&a_psi).map(|(x, y)| (x.conj() * y).re).sum::<f64>();
        }
        g
    }
}

/// Pool gradients at `psi`, in pool order.
pub fn pool_gradients(h: &SparseOperator, pool: &[ParameterGroup], psi: &[Complex64]) -> Result<Vec<f64>> {
    let entries = compile_pool(pool, h.n_qubits())?;
    let h_psi = h.apply_raw(psi);
    Ok(entries.par_iter().map(|e| e.gradient(psi, &h_psi)).collect())
}

fn compile_pool(pool: &[ParameterGroup], n_qubits: usize) -> Result<Vec<PoolEntry>> {
    pool.iter()
        .map(|g| {
            let members = g
                .members
                .iter()
                .map(|m| Ok((CompiledExcitation::new(&m.excitation, n_qubits)?, m.weight)))
                .collect::<Result<Vec<_>>>()?;
            Ok(PoolEntry { id: g.id, members })
        })
        .collect()
}

pub fn adapt_vqe(
    h: &SparseOperator,
    n_electrons: usize,
    pool: &[ParameterGroup],
    cfg: &AdaptConfig,
) -> Result<AdaptResult> {
    if !(cfg.epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be positive, got {}", cfg.epsilon)));
    }
    let n_qubits = h.n_qubits();
    let entries = compile_pool(pool, n_qubits)?;
    let mut circuit = AnsatzCircuit::empty(n_qubits, n_electrons);
    let mut theta: Vec<f64> = Vec::new();
    let mut compiled = circuit.compile()?;
    let mut energy = compiled.energy(&theta, h)?;
    let mut log = Vec::new();
    let mut warning = None;

    let final_norm = loop {
        let psi = compiled.state(&theta)?;
        let h_psi = h.apply(&psi);
        let grads: Vec<f64> = entries.par_iter().map(|e| e.gradient(psi.amplitudes(), &h_psi)).collect();
        let norm = grads.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm < cfg.epsilon || entries.is_empty() {
            break norm;
        }
        if log.len() >= cfg.max_iterations {
            warning = Some(format!("stopped after {} iterations with gradient norm {norm:e}", cfg.max_iterations));
            break norm;
        }
        // first maximum wins, so ties go to the earlier pool entry
        let (best, max_gradient) =
            grads
                .iter()
                .enumerate()
                .fold((0, -1.0f64), |(bi, bv), (i, g)| if g.abs() > bv { (i, g.abs()) } else { (bi, bv) });
        let chosen = &pool[best];
        circuit.blocks.push(AnsatzBlock::from_group(chosen));
        theta.push(0.0);
        compiled = circuit.compile()?;
        let r = vqe_compiled(&compiled, h, Some(&theta), &cfg.bfgs)?;
        theta = r.theta;
        energy = r.energy;
        log.push(AdaptIteration {
            selected_group: entries[best].id,
            gradient_norm: norm,
            max_gradient,
            energy,
            n_parameters: theta.len(),
        });
    };
    Ok(AdaptResult {
        epsilon: cfg.epsilon,
        iterations: log,
        energy,
        theta,
        circuit,
        final_gradient_norm: final_norm,
        converged: warning.is_none(),
        warning,
    })
}
