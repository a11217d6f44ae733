//! Dense statevector simulation.
//!
//! Amplitude `k` belongs to the basis state whose bit `q` is the occupation of
//! qubit `q`.

mod ansatz;
mod sparse;

pub use ansatz::{
    apply_excitation_exp, commutator_expectation, energy_and_gradient, AnsatzBlock, AnsatzCircuit, CompiledAnsatz,
    CompiledExcitation,
};
pub use sparse::{expectation, SparseOperator};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::operator::PauliString;

/// Largest register the dense simulator accepts.
pub const MAX_SIM_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(n_qubits: usize, index: u64) -> Result<Self> {
        if n_qubits > MAX_SIM_QUBITS {
            return Err(invalid(format!("{n_qubits} qubits exceeds the simulator limit of {MAX_SIM_QUBITS}")));
        }
        if index >> n_qubits != 0 {
            return Err(invalid(format!("basis index {index:#b} does not fit {n_qubits} qubits")));
        }
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index as usize] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Takes ownership of raw amplitudes, normalizing them.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(invalid(format!("{} amplitudes is not a power of two", amps.len())));
        }
        let n_qubits = amps.len().trailing_zeros() as usize;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self { n_qubits, amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// `exp(i φ P)`, exact for any Pauli string.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, phi: f64) {
        apply_pauli_rotation(&mut self.amps, p, phi);
    }

    /// `P|ψ⟩` as raw amplitudes.
    pub fn pauli_image(&self, p: &PauliString) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.amps.len()];
        let x = p.x_mask() as usize;
        for (b, a) in self.amps.iter().enumerate() {
            out[b ^ x] += p.basis_phase(b as u64) * a;
        }
        out
    }

    pub fn apply_x(&mut self, q: usize) {
        let bit = 1usize << q;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                self.amps.swap(b, b | bit);
            }
        }
    }

    pub fn apply_h(&mut self, q: usize) {
        let bit = 1usize << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let (a0, a1) = (self.amps[b], self.amps[b | bit]);
                self.amps[b] = (a0 + a1) * s;
                self.amps[b | bit] = (a0 - a1) * s;
            }
        }
    }

    /// `Rx(θ) = exp(−i θ X / 2)`.
    pub fn apply_rx(&mut self, q: usize, theta: f64) {
        self.apply_pauli_rotation(&PauliString::new(1 << q, 0), -theta / 2.0);
    }

    /// `Rz(θ) = exp(−i θ Z / 2)`.
    pub fn apply_rz(&mut self, q: usize, theta: f64) {
        self.apply_pauli_rotation(&PauliString::new(0, 1 << q), -theta / 2.0);
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let c = 1usize << control;
        let t = 1usize << target;
        for b in 0..self.amps.len() {
            if b & c != 0 && b & t == 0 {
                self.amps.swap(b, b | t);
            }
        }
    }

    /// Mean occupation of each qubit.
    pub fn occupations(&self) -> Vec<f64> {
        (0..self.n_qubits)
            .map(|q| self.amps.iter().enumerate().filter(|(b, _)| b >> q & 1 == 1).map(|(_, a)| a.norm_sqr()).sum())
            .collect()
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// In-place `exp(i φ P)`: `cos φ |ψ⟩ + i sin φ P|ψ⟩`.
pub(crate) fn apply_pauli_rotation(amps: &mut [Complex64], p: &PauliString, phi: f64) {
    let (s, c) = phi.sin_cos();
    let is = Complex64::new(0.0, s);
    let x = p.x_mask() as usize;
    if x == 0 {
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= c + is * p.basis_phase(b as u64);
        }
        return;
    }
    let pivot = 1usize << (63 - (x as u64).leading_zeros());
    for b in 0..amps.len() {
        if b & pivot != 0 {
            continue;
        }
        let d = b ^ x;
        let (ab, ad) = (amps[b], amps[d]);
        amps[b] = c * ab + is * p.basis_phase(d as u64) * ad;
        amps[d] = c * ad + is * p.basis_phase(b as u64) * ab;
    }
}

/// Hartree-Fock determinant: qubits `0..n_electrons` occupied.
pub fn hartree_fock_state(n_qubits: usize, n_electrons: usize) -> Result<StateVector> {
    if n_electrons > n_qubits {
        return Err(invalid(format!("{n_electrons} electrons do not fit {n_qubits} qubits")));
    }
    StateVector::basis(n_qubits, hartree_fock_bits(n_electrons))
}

pub fn hartree_fock_bits(n_electrons: usize) -> u64 {
    if n_electrons >= 64 {
        u64::MAX
    } else {
        (1u64 << n_electrons) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{Pauli, PauliOperator};

    #[test]
    fn hf_states() {
        let s = hartree_fock_state(4, 2).unwrap();
        assert_eq!(s.amplitude(0b0011), ONE);
        let empty = hartree_fock_state(1, 0).unwrap();
        assert_eq!(empty.amplitude(0), ONE);
        let s8 = hartree_fock_state(8, 4).unwrap();
        let n: f64 = s8.occupations().iter().sum();
        assert_eq!(n, 4.0);
        assert!(hartree_fock_state(2, 3).is_err());
    }

    #[test]
    fn z_on_occupied_qubit() {
        let s = hartree_fock_state(2, 1).unwrap();
        let z0 = PauliOperator::from_terms(2, [(PauliString::single(0, Pauli::Z), ONE)]);
        assert_eq!(expectation(&s, &z0).unwrap(), -1.0);
    }

    #[test]
    fn rotation_matches_dense_exponential() {
        // exp(i φ X) on |0>: cos φ |0> + i sin φ |1>
        let mut s = StateVector::basis(1, 0).unwrap();
        s.apply_pauli_rotation(&PauliString::single(0, Pauli::X), 0.3);
        assert!((s.amplitude(0) - Complex64::new(0.3f64.cos(), 0.0)).norm() < 1e-15);
        assert!((s.amplitude(1) - Complex64::new(0.0, 0.3f64.sin())).norm() < 1e-15);
        // Y: exp(i φ Y)|0> = cos φ|0> − sin φ|1>
        let mut s = StateVector::basis(1, 0).unwrap();
        s.apply_pauli_rotation(&PauliString::single(0, Pauli::Y), 0.3);
        assert!((s.amplitude(1) - Complex64::new(-(0.3f64.sin()), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gates() {
        let mut s = StateVector::basis(2, 0).unwrap();
        s.apply_h(0);
        s.apply_cnot(0, 1);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0).re - r).abs() < 1e-15 && (s.amplitude(3).re - r).abs() < 1e-15);
        s.apply_x(1);
        assert!((s.amplitude(2).re - r).abs() < 1e-15);
        let mut t = StateVector::basis(1, 0).unwrap();
        t.apply_rx(0, std::f64::consts::PI);
        assert!((t.amplitude(1) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
