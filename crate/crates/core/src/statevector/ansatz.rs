//! Trotterized excitation ansatz and its adjoint gradient.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sparse::real_part;
use super::{apply_pauli_rotation, hartree_fock_state, inner, SparseOperator, StateVector};
use crate::error::{invalid, GbefError, Result};
use crate::operator::{excitation_generator, jordan_wigner, Excitation, ParameterGroup, PauliOperator, PauliString};

/// Tolerance on the real part of generator coefficients after encoding.
const ANTI_HERMITIAN_TOLERANCE: f64 = 1e-14;

/// One free parameter driving a weighted set of excitations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzBlock {
    pub group_id: usize,
    pub members: Vec<(Excitation, f64)>,
}

impl AnsatzBlock {
    pub fn from_group(g: &ParameterGroup) -> Self {
        Self { group_id: g.id, members: g.member_pairs() }
    }
}

/// `∏_g ∏_j exp(θ_g w_j A_j) |HF⟩`, the first block acting first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzCircuit {
    pub n_qubits: usize,
    pub n_electrons: usize,
    pub blocks: Vec<AnsatzBlock>,
}

impl AnsatzCircuit {
    pub fn empty(n_qubits: usize, n_electrons: usize) -> Self {
        Self { n_qubits, n_electrons, blocks: Vec::new() }
    }

    pub fn from_groups<'a>(
        n_qubits: usize,
        n_electrons: usize,
        groups: impl IntoIterator<Item = &'a ParameterGroup>,
    ) -> Self {
        Self { n_qubits, n_electrons, blocks: groups.into_iter().map(AnsatzBlock::from_group).collect() }
    }

    pub fn n_parameters(&self) -> usize {
        self.blocks.len()
    }

    pub fn group_ids(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.group_id).collect()
    }

    pub fn n_excitations(&self) -> usize {
        self.blocks.iter().map(|b| b.members.len()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_electrons > self.n_qubits {
            return Err(invalid(format!("{} electrons do not fit {} qubits", self.n_electrons, self.n_qubits)));
        }
        for b in &self.blocks {
            for (e, w) in &b.members {
                e.validate()?;
                if e.qubits().iter().any(|&q| q >= self.n_qubits) {
                    return Err(invalid(format!("excitation {e} exceeds the {}-qubit register", self.n_qubits)));
                }
                if !w.is_finite() || *w == 0.0 {
                    return Err(invalid(format!("excitation {e} has weight {w}")));
                }
            }
        }
        Ok(())
    }

    pub fn compile(&self) -> Result<CompiledAnsatz> {
        self.validate()?;
        let mut rotations = Vec::new();
        for (k, b) in self.blocks.iter().enumerate() {
            for (e, w) in &b.members {
                for (p, c) in CompiledExcitation::new(e, self.n_qubits)?.strings {
                    rotations.push(Rotation { parameter: k, string: p, coeff: w * c });
                }
            }
        }
        Ok(CompiledAnsatz {
            n_qubits: self.n_qubits,
            reference: hartree_fock_state(self.n_qubits, self.n_electrons)?,
            n_parameters: self.blocks.len(),
            rotations,
        })
    }
}

/// JW image of one generator written as `A = Σ_k i c_k P_k` with real `c_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledExcitation {
    pub strings: Vec<(PauliString, f64)>,
}

impl CompiledExcitation {
    pub fn new(e: &Excitation, n_qubits: usize) -> Result<Self> {
        Self::from_operator(&jordan_wigner(&excitation_generator(e), n_qubits)?)
    }

    /// Accepts any anti-Hermitian Pauli operator whose strings all commute.
    pub fn from_operator(a: &PauliOperator) -> Result<Self> {
        let mut strings = Vec::with_capacity(a.len());
        for (s, c) in a.iter() {
            if c.re.abs() > ANTI_HERMITIAN_TOLERANCE {
                return Err(GbefError::Numerical(format!("generator term {s} has real part {:e}", c.re)));
            }
            strings.push((*s, c.im));
        }
        for (i, (p, _)) in strings.iter().enumerate() {
            if strings[i + 1..].iter().any(|(q, _)| !p.commutes_with(q)) {
                return Err(invalid(format!("generator strings do not commute ({p})")));
            }
        }
        Ok(Self { strings })
    }

    /// `exp(φ A)` in place.
    pub fn apply_exp(&self, amps: &mut [Complex64], phi: f64) {
        for (p, c) in &self.strings {
            apply_pauli_rotation(amps, p, phi * c);
        }
    }

    /// `A|ψ⟩` as raw amplitudes.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (p, c) in &self.strings {
            let x = p.x_mask() as usize;
            let ic = Complex64::new(0.0, *c);
            for (b, a) in amps.iter().enumerate() {
                out[b ^ x] += ic * p.basis_phase(b as u64) * a;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Rotation {
    parameter: usize,
    string: PauliString,
    coeff: f64,
}

/// Flattened Pauli-rotation form of an [`AnsatzCircuit`].
#[derive(Debug, Clone)]
pub struct CompiledAnsatz {
    n_qubits: usize,
    reference: StateVector,
    n_parameters: usize,
    rotations: Vec<Rotation>,
}

impl CompiledAnsatz {
    pub fn n_parameters(&self) -> usize {
        self.n_parameters
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_rotations(&self) -> usize {
        self.rotations.len()
    }

    fn check(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n_parameters {
            return Err(invalid(format!("expected {} parameters, got {}", self.n_parameters, theta.len())));
        }
        if let Some(t) = theta.iter().find(|t| !t.is_finite()) {
            return Err(invalid(format!("non-finite parameter {t}")));
        }
        Ok(())
    }

    pub fn state(&self, theta: &[f64]) -> Result<StateVector> {
        self.check(theta)?;
        let mut amps = self.reference.amplitudes().to_vec();
        for r in &self.rotations {
            apply_pauli_rotation(&mut amps, &r.string, theta[r.parameter] * r.coeff);
        }
        StateVector::from_amplitudes(amps)
    }

    pub fn energy(&self, theta: &[f64], h: &SparseOperator) -> Result<f64> {
        h.expectation(&self.state(theta)?)
    }

    /// Energy and exact gradient by one forward and one reverse sweep.
    pub fn energy_and_gradient(&self, theta: &[f64], h: &SparseOperator) -> Result<(f64, Vec<f64>)> {
        let state = self.state(theta)?;
        h.check_register(&state)?;
        let mut psi = state.amplitudes().to_vec();
        let mut lambda = h.apply_raw(&psi);
        let energy = real_part(inner(&psi, &lambda))?;
        let mut grad = vec![0.0; self.n_parameters];
        for r in self.rotations.iter().rev() {
            // dE/dφ = 2 Re ⟨λ| i c P |ψ⟩ with ψ the state just after this rotation
            let x = r.string.x_mask() as usize;
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, a) in psi.iter().enumerate() {
                acc += lambda[b ^ x].conj() * r.string.basis_phase(b as u64) * a;
            }
            grad[r.parameter] += 2.0 * (Complex64::new(0.0, r.coeff) * acc).re;
            let phi = -theta[r.parameter] * r.coeff;
            apply_pauli_rotation(&mut psi, &r.string, phi);
            apply_pauli_rotation(&mut lambda, &r.string, phi);
        }
        Ok((energy, grad))
    }
}

/// Energy and analytic gradient of a circuit at `theta`.
pub fn energy_and_gradient(circuit: &AnsatzCircuit, theta: &[f64], h: &SparseOperator) -> Result<(f64, Vec<f64>)> {
    circuit.compile()?.energy_and_gradient(theta, h)
}

/// `∏_j exp(θ w_j A_j) |ψ⟩`, members applied in order.
pub fn apply_excitation_exp(state: &StateVector, members: &[(Excitation, f64)], theta: f64) -> Result<StateVector> {
    let mut amps = state.amplitudes().to_vec();
    for (e, w) in members {
        CompiledExcitation::new(e, state.n_qubits())?.apply_exp(&mut amps, theta * w);
    }
    StateVector::from_amplitudes(amps)
}

/// `⟨ψ|H A|ψ⟩ − ⟨ψ|A H|ψ⟩`, evaluated literally.
pub fn commutator_expectation(state: &StateVector, h: &SparseOperator, a: &CompiledExcitation) -> Result<f64> {
    h.check_register(state)?;
    let psi = state.amplitudes();
    let h_a = h.apply_raw(&a.apply(psi));
    let a_h = a.apply(&h.apply_raw(psi));
    real_part(inner(psi, &h_a) - inner(psi, &a_h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::SpinOrbital;

    fn pair_double() -> Excitation {
        Excitation::double([SpinOrbital::alpha(0), SpinOrbital::beta(0)], [SpinOrbital::alpha(1), SpinOrbital::beta(1)])
    }

    #[test]
    fn zero_angle_is_identity() {
        let hf = hartree_fock_state(4, 2).unwrap();
        let out = apply_excitation_exp(&hf, &[(pair_double(), 1.0)], 0.0).unwrap();
        assert_eq!(out, hf);
    }

    #[test]
    fn quarter_turn_transfers_the_pair() {
        let hf = hartree_fock_state(4, 2).unwrap();
        let out = apply_excitation_exp(&hf, &[(pair_double(), 1.0)], std::f64::consts::FRAC_PI_2).unwrap();
        assert!((out.amplitude(0b1100).norm() - 1.0).abs() < 1e-14);
        assert!(out.amplitude(0b0011).norm() < 1e-14);
    }

    #[test]
    fn forward_then_back() {
        let hf = hartree_fock_state(4, 2).unwrap();
        let m = [(pair_double(), 1.0), (Excitation::single(SpinOrbital::alpha(0), SpinOrbital::alpha(1)), -0.5)];
        let fwd = apply_excitation_exp(&hf, &m, 0.37).unwrap();
        let rev: Vec<_> = m.iter().rev().copied().collect();
        let back = apply_excitation_exp(&fwd, &rev, -0.37).unwrap();
        assert!((back.fidelity(&hf) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_hamiltonian() {
        let groups =
            crate::operator::group_spin_adapted(&crate::operator::enumerate_excitations(2, 2).unwrap()).unwrap();
        let c = AnsatzCircuit::from_groups(4, 2, &groups);
        let h = SparseOperator::from_pauli(&PauliOperator::identity(4, 1.0)).unwrap();
        let (e, g) = energy_and_gradient(&c, &[0.3, -0.2], &h).unwrap();
        assert!((e - 1.0).abs() < 1e-14);
        assert!(g.iter().all(|x| x.abs() < 1e-14));
        assert!(energy_and_gradient(&c, &[f64::NAN, 0.0], &h).is_err());
        assert!(energy_and_gradient(&c, &[0.0], &h).is_err());
    }
}
