//! Jordan-Wigner staircase circuits for excitation ansatze and their depth.
//!
//! Each Pauli rotation `exp(iφ P)` becomes a basis change onto Z, a CNOT
//! ladder over the sorted support, one `Rz(−2φ)` on the last qubit, and the
//! mirrored ladder and basis change. The Hartree-Fock preparation is not part
//! of the gate list.

mod depth;

pub use depth::{depth, DepthReport, GateCounts};

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::operator::{Excitation, Pauli, PauliString};
use crate::statevector::{AnsatzCircuit, CompiledExcitation, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    H {
        qubit: usize,
    },
    /// `Rx(angle) = exp(−i angle X / 2)` with a fixed angle.
    Rx {
        qubit: usize,
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// `Rz(scale · θ[parameter])`.
    Rz {
        qubit: usize,
        parameter: usize,
        scale: f64,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { qubit } | Gate::Rx { qubit, .. } | Gate::Rz { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H { .. } => "h",
            Gate::Rx { .. } => "rx",
            Gate::Cnot { .. } => "cx",
            Gate::Rz { .. } => "rz",
        }
    }

    fn cancels(&self, other: &Gate) -> bool {
        match (*self, *other) {
            (Gate::H { qubit: a }, Gate::H { qubit: b }) => a == b,
            (Gate::Rx { qubit: a, angle: x }, Gate::Rx { qubit: b, angle: y }) => a == b && x + y == 0.0,
            (Gate::Cnot { control: c1, target: t1 }, Gate::Cnot { control: c2, target: t2 }) => c1 == c2 && t1 == t2,
            _ => false,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H { qubit } => write!(f, "h {qubit}"),
            Gate::Rx { qubit, angle } => write!(f, "rx {qubit} {angle:?}"),
            Gate::Cnot { control, target } => write!(f, "cx {control} {target}"),
            Gate::Rz { qubit, parameter, scale } => write!(f, "rz {qubit} p{parameter} {scale:?}"),
        }
    }
}

/// Gate range `start..end` produced by one ansatz excitation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcitationSpan {
    pub block: usize,
    pub excitation: Excitation,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateCircuit {
    pub n_qubits: usize,
    pub n_parameters: usize,
    pub gates: Vec<Gate>,
    pub spans: Vec<ExcitationSpan>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisOptions {
    /// Remove adjacent self-inverse pairs. Off for the reported depths.
    pub cancel_adjacent: bool,
}

impl GateCircuit {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            if let Some(q) = g.qubits().into_iter().find(|&q| q >= self.n_qubits) {
                return Err(invalid(format!("gate `{g}` touches qubit {q} of a {}-qubit register", self.n_qubits)));
            }
            match *g {
                Gate::Cnot { control, target } if control == target => {
                    return Err(invalid(format!("gate `{g}` uses one qubit twice")));
                }
                Gate::Rz { parameter, .. } if parameter >= self.n_parameters => {
                    return Err(invalid(format!("gate `{g}` references a missing parameter")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Applies the gates to `state` in order.
    pub fn simulate(&self, theta: &[f64], state: &mut StateVector) -> Result<()> {
        if theta.len() != self.n_parameters {
            return Err(invalid(format!("expected {} parameters, got {}", self.n_parameters, theta.len())));
        }
        if state.n_qubits() != self.n_qubits {
            return Err(invalid(format!("{}-qubit state for a {}-qubit circuit", state.n_qubits(), self.n_qubits)));
        }
        for g in &self.gates {
            match *g {
                Gate::H { qubit } => state.apply_h(qubit),
                Gate::Rx { qubit, angle } => state.apply_rx(qubit, angle),
                Gate::Cnot { control, target } => state.apply_cnot(control, target),
                Gate::Rz { qubit, parameter, scale } => state.apply_rz(qubit, scale * theta[parameter]),
            }
        }
        Ok(())
    }

    /// One gate per line after a `qubits N parameters M` header.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GateCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {} parameters {}", self.n_qubits, self.n_parameters)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

pub fn synthesize(circuit: &AnsatzCircuit) -> Result<GateCircuit> {
    synthesize_with(circuit, SynthesisOptions::default())
}

pub fn synthesize_with(circuit: &AnsatzCircuit, opts: SynthesisOptions) -> Result<GateCircuit> {
    circuit.validate()?;
    let mut gates = Vec::new();
    let mut spans = Vec::new();
    for (k, b) in circuit.blocks.iter().enumerate() {
        for (e, w) in &b.members {
            let start = gates.len();
            for (p, c) in CompiledExcitation::new(e, circuit.n_qubits)?.strings {
                for g in pauli_rotation_gates(&p, k, -2.0 * w * c) {
                    push_gate(&mut gates, g, opts.cancel_adjacent);
                }
            }
            spans.push(ExcitationSpan { block: k, excitation: *e, start: start.min(gates.len()), end: gates.len() });
        }
    }
    Ok(GateCircuit { n_qubits: circuit.n_qubits, n_parameters: circuit.n_parameters(), gates, spans })
}

/// Staircase for `Rz`-equivalent rotation `exp(−i (scale θ / 2) P)`.
pub fn pauli_rotation_gates(p: &PauliString, parameter: usize, scale: f64) -> Vec<Gate> {
    let support: Vec<usize> = (0..64).filter(|q| p.support() >> q & 1 == 1).collect();
    let Some(&last) = support.last() else {
        return Vec::new();
    };
    let mut into = Vec::new();
    let mut out = Vec::new();
    for &q in &support {
        match p.pauli_at(q) {
            Pauli::X => {
                into.push(Gate::H { qubit: q });
                out.push(Gate::H { qubit: q });
            }
            Pauli::Y => {
                into.push(Gate::Rx { qubit: q, angle: FRAC_PI_2 });
                out.push(Gate::Rx { qubit: q, angle: -FRAC_PI_2 });
            }
            _ => {}
        }
    }
    let ladder: Vec<Gate> = support.windows(2).map(|w| Gate::Cnot { control: w[0], target: w[1] }).collect();
    let mut gates = into;
    gates.extend(ladder.iter().copied());
    gates.push(Gate::Rz { qubit: last, parameter, scale });
    gates.extend(ladder.iter().rev().copied());
    gates.extend(out);
    gates
}

fn push_gate(gates: &mut Vec<Gate>, g: Gate, cancel: bool) {
    if cancel {
        let qs = g.qubits();
        if let Some(i) = gates.iter().rposition(|h| h.qubits().iter().any(|q| qs.contains(q))) {
            if gates[i].cancels(&g) {
                gates.remove(i);
                return;
            }
        }
    }
    gates.push(g);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{Excitation, SpinOrbital};
    use crate::statevector::AnsatzBlock;

    #[test]
    fn zz_rotation_is_three_gates() {
        let g = pauli_rotation_gates(&PauliString::from_label("ZZ").unwrap(), 0, 1.0);
        assert_eq!(
            g,
            vec![
                Gate::Cnot { control: 0, target: 1 },
                Gate::Rz { qubit: 1, parameter: 0, scale: 1.0 },
                Gate::Cnot { control: 0, target: 1 },
            ]
        );
    }

    #[test]
    fn identity_string_has_no_gates() {
        assert!(pauli_rotation_gates(&PauliString::IDENTITY, 0, 1.0).is_empty());
    }

    fn circuit_of(e: Excitation, n_qubits: usize) -> AnsatzCircuit {
        AnsatzCircuit { n_qubits, n_electrons: 2, blocks: vec![AnsatzBlock { group_id: 0, members: vec![(e, 1.0)] }] }
    }

    #[test]
    fn adjacent_single_has_two_staircases() {
        let e = Excitation::single(SpinOrbital::alpha(0), SpinOrbital::beta(0));
        let gc = synthesize(&circuit_of(e, 2)).unwrap();
        let rz = gc.gates.iter().filter(|g| matches!(g, Gate::Rz { .. })).count();
        assert_eq!(rz, 2);
        // XY and YX: two basis changes, CNOT, Rz, CNOT, two basis changes
        assert_eq!(gc.len(), 2 * 7);
    }

    #[test]
    fn double_has_eight_strings() {
        let e = Excitation::double(
            [SpinOrbital::beta(0), SpinOrbital::alpha(0)],
            [SpinOrbital::beta(1), SpinOrbital::alpha(1)],
        );
        let gc = synthesize(&circuit_of(e, 4)).unwrap();
        assert_eq!(gc.gates.iter().filter(|g| matches!(g, Gate::Rz { .. })).count(), 8);
        gc.validate().unwrap();
    }

    #[test]
    fn cancellation_only_shortens() {
        let e = Excitation::double(
            [SpinOrbital::beta(0), SpinOrbital::alpha(0)],
            [SpinOrbital::beta(1), SpinOrbital::alpha(1)],
        );
        let plain = synthesize(&circuit_of(e, 4)).unwrap();
        let short = synthesize_with(&circuit_of(e, 4), SynthesisOptions { cancel_adjacent: true }).unwrap();
        assert!(short.len() < plain.len());
        let theta = [0.37];
        let mut a = crate::statevector::hartree_fock_state(4, 2).unwrap();
        let mut b = a.clone();
        plain.simulate(&theta, &mut a).unwrap();
        short.simulate(&theta, &mut b).unwrap();
        assert!((a.fidelity(&b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn text_export() {
        let gc = GateCircuit {
            n_qubits: 2,
            n_parameters: 1,
            gates: vec![
                Gate::H { qubit: 0 },
                Gate::Cnot { control: 0, target: 1 },
                Gate::Rz { qubit: 1, parameter: 0, scale: -0.5 },
            ],
            spans: vec![],
        };
        assert_eq!(gc.to_text(), "qubits 2 parameters 1\nh 0\ncx 0 1\nrz 1 p0 -0.5\n");
    }

    #[test]
    fn validation_catches_bad_gates() {
        let mut gc = GateCircuit { n_qubits: 2, n_parameters: 0, gates: vec![Gate::H { qubit: 2 }], spans: vec![] };
        assert!(gc.validate().is_err());
        gc.gates = vec![Gate::Rz { qubit: 0, parameter: 0, scale: 1.0 }];
        assert!(gc.validate().is_err());
        gc.gates = vec![Gate::Cnot { control: 1, target: 1 }];
        assert!(gc.validate().is_err());
    }
}
