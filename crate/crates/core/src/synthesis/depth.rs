use serde::{Deserialize, Serialize};

use super::{Gate, GateCircuit};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub h: usize,
    pub rx: usize,
    pub cnot: usize,
    pub rz: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.h + self.rx + self.cnot + self.rz
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthReport {
    pub depth: usize,
    /// Depth added by each excitation span, in circuit order; sums to `depth`.
    pub contributions: Vec<usize>,
    pub counts: GateCounts,
    /// Gates on the busiest qubit, a lower bound on `depth`.
    pub max_qubit_load: usize,
}

/// ASAP layering with unit-duration gates and all-to-all connectivity.
pub fn depth(gc: &GateCircuit) -> DepthReport {
    let mut finish = vec![0usize; gc.n_qubits];
    let mut load = vec![0usize; gc.n_qubits];
    let mut counts = GateCounts::default();
    let mut running = 0;
    let mut after_gate = Vec::with_capacity(gc.gates.len() + 1);
    after_gate.push(0);
    for g in &gc.gates {
        let qs = g.qubits();
        let layer = 1 + qs.iter().map(|&q| finish[q]).max().unwrap_or(0);
        for &q in &qs {
            finish[q] = layer;
            load[q] += 1;
        }
        running = running.max(layer);
        after_gate.push(running);
        match g {
            Gate::H { .. } => counts.h += 1,
            Gate::Rx { .. } => counts.rx += 1,
            Gate::Cnot { .. } => counts.cnot += 1,
            Gate::Rz { .. } => counts.rz += 1,
        }
    }
    let contributions = gc.spans.iter().map(|s| after_gate[s.end] - after_gate[s.start]).collect();
    DepthReport { depth: running, contributions, counts, max_qubit_load: load.into_iter().max().unwrap_or(0) }
}
