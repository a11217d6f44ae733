//! Correlation energy as a weighted sum of HF–double couplings.
//!
//! For the exact ground state `|Φ⟩ = c0|HF⟩ + Σ c_d |Ψ_d⟩`, projecting
//! `H|Φ⟩ = E|Φ⟩` onto `⟨HF|` gives `E − E_HF = Σ_d (c_d / c0) ⟨HF|H|Ψ_d⟩`.
//! Only singles and doubles couple to HF, and singles drop out for converged
//! HF orbitals.

use serde::{Deserialize, Serialize};

use super::fci::FciResult;
use crate::error::{invalid, Result};
use crate::operator::{enumerate_excitations, Excitation};
use crate::statevector::{hartree_fock_bits, SparseOperator};

/// Below this `|c0|` the HF reference no longer dominates the ground state.
pub const WEAK_REFERENCE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTerm {
    pub excitation: Excitation,
    /// `c_d / c0` with `|Ψ_d⟩ = T_d|HF⟩`.
    pub amplitude_ratio: f64,
    /// `⟨HF|H|Ψ_d⟩`, half the HF-point gradient of `T_d − T_d†`.
    pub coupling: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationDecomposition {
    pub c0: f64,
    pub hf_energy: f64,
    pub doubles: Vec<CorrelationTerm>,
    pub singles: Vec<CorrelationTerm>,
    /// Σ over doubles: the predicted correlation energy.
    pub sum: f64,
    pub singles_sum: f64,
    pub warning: Option<String>,
}

pub fn correlation_decomposition(
    fci: &FciResult,
    h: &SparseOperator,
    n_electrons: usize,
) -> Result<CorrelationDecomposition> {
    let n_qubits = h.n_qubits();
    if !n_qubits.is_multiple_of(2) {
        return Err(invalid("register must hold whole spatial orbitals"));
    }
    let hf = hartree_fock_bits(n_electrons);
    let c0 = fci.coefficient(hf);
    let warning = (c0.abs() < WEAK_REFERENCE_THRESHOLD)
        .then(|| format!("|c0| = {:e}: the HF determinant does not dominate the ground state", c0.abs()));
    let hf_energy = h.element(hf, hf).re;
    let mut doubles = Vec::new();
    let mut singles = Vec::new();
    for e in enumerate_excitations(n_qubits / 2, n_electrons)? {
        let (sign, det) = crate::operator::apply_ladder_sequence(&e.excitation_ops(), hf)
            .ok_or_else(|| invalid(format!("{e} does not act on the reference")))?;
        let amplitude_ratio = if c0 == 0.0 { 0.0 } else { sign * fci.coefficient(det) / c0 };
        let coupling = sign * h.element(hf, det).re;
        let term =
            CorrelationTerm { excitation: e, amplitude_ratio, coupling, contribution: amplitude_ratio * coupling };
        if e.is_single() {
            singles.push(term);
        } else {
            doubles.push(term);
        }
    }
    let sum = doubles.iter().map(|t| t.contribution).sum();
    let singles_sum = singles.iter().map(|t| t.contribution).sum();
    Ok(CorrelationDecomposition { c0, hf_energy, doubles, singles, sum, singles_sum, warning })
}
