//! Compression of the Hamiltonian and one excitation onto the excitation's
//! own 2 or 4 qubits.
//!
//! Along the path `exp(θA)|HF⟩` every spectator qubit keeps its HF
//! occupation. Strings that flip a spectator therefore never contribute, and a
//! spectator `Z` is the constant `(−1)^{occupation}`. The same holds for the
//! Jordan-Wigner parity string of `A` itself, which reduces to `parity_sign`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::operator::{
    excitation_generator, jordan_wigner, Excitation, FermionOperator, LadderOp, PauliOperator, PauliString,
};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceProblem {
    /// Ascending; local qubit `j` is `active_qubits[j]`.
    pub active_qubits: Vec<usize>,
    pub h_sub: CMatrix,
    pub a_sub: CMatrix,
    /// Local basis index of the HF determinant.
    pub hf_sub: usize,
    pub parity_sign: f64,
}

fn local_matrix(p: &PauliString, k: usize) -> CMatrix {
    let dim = 1usize << k;
    let mut m = CMatrix::zeros(dim, dim);
    let x = p.x_mask() as usize;
    for col in 0..dim {
        m[(col ^ x, col)] = p.basis_phase(col as u64);
    }
    m
}

fn active_mask(active: &[usize]) -> u64 {
    active.iter().fold(0u64, |m, &q| m | 1 << q)
}

/// Projects a full-register operator onto `active`, fixing spectators at
/// their `reference` occupations.
pub fn project_operator(op: &PauliOperator, active: &[usize], reference: u64) -> CMatrix {
    let k = active.len();
    let spectators = !active_mask(active);
    let mut m = CMatrix::zeros(1 << k, 1 << k);
    for (s, c) in op.iter() {
        if s.x_mask() & spectators != 0 {
            continue;
        }
        let sign = if (s.z_mask() & spectators & reference).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        let local = s.restrict(active);
        m += local_matrix(&local, k) * (c * sign);
    }
    m
}

/// Spectator parity of the excitation's Jordan-Wigner string at `reference`.
///
/// With sorted indices `i1 < i2 (< i3 < i4)`, a spectator carries `Z` when an
/// odd number of the excitation's modes lie above it: the gap `(i1, i2)`, and
/// for doubles also `(i3, i4)`.
pub fn parity_sign(e: &Excitation, reference: u64) -> f64 {
    let q = e.qubits();
    let between = |lo: usize, hi: usize| -> u64 {
        if hi <= lo + 1 {
            0
        } else {
            ((1u64 << hi) - 1) & !((1u64 << (lo + 1)) - 1)
        }
    };
    let mut mask = between(q[0], q[1]);
    if q.len() == 4 {
        mask |= between(q[2], q[3]);
    }
    if (mask & reference).count_ones() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Generator of `e` written on local modes `0..k`.
fn local_generator(e: &Excitation, active: &[usize]) -> FermionOperator {
    let local = |q: usize| active.iter().position(|&a| a == q).expect("qubit is active");
    let relabel = |ops: Vec<LadderOp>| -> Vec<LadderOp> {
        ops.into_iter().map(|o| LadderOp { mode: local(o.mode), dagger: o.dagger }).collect()
    };
    let t = FermionOperator::term(&relabel(e.excitation_ops()), 1.0);
    let td = FermionOperator::term(&relabel(e.deexcitation_ops()), 1.0);
    &t - &td
}

/// Builds the compressed problem for one excitation.
pub fn project_subspace(h: &PauliOperator, reference: u64, e: &Excitation) -> Result<SubspaceProblem> {
    e.validate()?;
    let active = e.qubits();
    if active.iter().any(|&q| q >= h.n_qubits()) {
        return Err(invalid(format!("excitation {e} exceeds the {}-qubit register", h.n_qubits())));
    }
    let k = active.len();
    let sign = parity_sign(e, reference);
    let a_local = jordan_wigner(&local_generator(e, &active), k)?;
    let a_sub = project_operator(&a_local, &(0..k).collect::<Vec<_>>(), 0) * Complex64::new(sign, 0.0);
    let hf_sub =
        active.iter().enumerate().filter(|(_, &q)| reference >> q & 1 == 1).fold(0usize, |m, (j, _)| m | 1 << j);
    Ok(SubspaceProblem {
        h_sub: project_operator(h, &active, reference),
        a_sub,
        hf_sub,
        parity_sign: sign,
        active_qubits: active,
    })
}

/// Same compression, but of the full-register image of the generator; used to
/// cross-check the parity folding.
pub fn project_generator_directly(e: &Excitation, n_qubits: usize, reference: u64) -> Result<CMatrix> {
    let full = jordan_wigner(&excitation_generator(e), n_qubits)?;
    Ok(project_operator(&full, &e.qubits(), reference))
}

impl SubspaceProblem {
    pub fn dim(&self) -> usize {
        self.h_sub.nrows()
    }

    /// `⟨hf|[H, A]|hf⟩`.
    pub fn gradient(&self) -> f64 {
        let i = self.hf_sub;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.dim() {
            acc += self.h_sub[(i, j)] * self.a_sub[(j, i)] - self.a_sub[(i, j)] * self.h_sub[(j, i)];
        }
        acc.re
    }

    /// `exp(θA)`, using `A³ = −A` for a single fermionic excitation.
    pub fn propagator(&self, theta: f64) -> CMatrix {
        let n = self.dim();
        let a2 = &self.a_sub * &self.a_sub;
        CMatrix::identity(n, n)
            + &self.a_sub * Complex64::new(theta.sin(), 0.0)
            + a2 * Complex64::new(1.0 - theta.cos(), 0.0)
    }

    /// `⟨hf|exp(−θA) H exp(θA)|hf⟩`.
    pub fn energy(&self, theta: f64) -> f64 {
        let u = self.propagator(theta);
        let psi = u.column(self.hf_sub).into_owned();
        let h_psi = &self.h_sub * &psi;
        psi.dotc(&h_psi).re
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        let h_herm = (&self.h_sub - self.h_sub.adjoint()).camax() <= tol;
        let a_anti = (&self.a_sub + self.a_sub.adjoint()).camax() <= tol;
        h_herm && a_anti
    }
}

/// `⟨hf|[H, A]|hf⟩` of a compressed problem.
pub fn subspace_gradient(p: &SubspaceProblem) -> f64 {
    p.gradient()
}

/// Energy along the one-parameter path inside the subspace.
pub fn subspace_energy(p: &SubspaceProblem, theta: f64) -> f64 {
    p.energy(theta)
}

/// Gradient record of one parameter group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientRecord {
    pub group_id: usize,
    pub representative: Excitation,
    pub gradient: f64,
    pub abs_gradient: f64,
}

impl GradientRecord {
    pub fn new(group_id: usize, representative: Excitation, gradient: f64) -> Self {
        Self { group_id, representative, gradient, abs_gradient: gradient.abs() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{Pauli, SpinOrbital};

    fn double_03() -> Excitation {
        // 0α,0β → 2α,2β on 6 qubits; spectators 2,3 sit inside (1,4)
        Excitation::double([SpinOrbital::alpha(0), SpinOrbital::beta(0)], [SpinOrbital::alpha(2), SpinOrbital::beta(2)])
    }

    #[test]
    fn identity_projects_to_identity() {
        let h = PauliOperator::identity(6, 2.5);
        let p = project_subspace(&h, 0b1111, &double_03()).unwrap();
        assert_eq!(p.dim(), 16);
        assert_eq!(p.h_sub, CMatrix::identity(16, 16) * Complex64::new(2.5, 0.0));
        assert_eq!(p.gradient(), 0.0);
    }

    #[test]
    fn spectator_flip_is_dropped() {
        let s = PauliString::from_ops(&[(2, Pauli::X), (0, Pauli::Z)]);
        let h = PauliOperator::from_terms(6, [(s, Complex64::new(1.0, 0.0))]);
        let p = project_subspace(&h, 0b1111, &double_03()).unwrap();
        assert_eq!(p.h_sub.camax(), 0.0);
    }

    #[test]
    fn spectator_z_reads_occupation() {
        let h = PauliOperator::from_terms(6, [(PauliString::single(2, Pauli::Z), Complex64::new(1.0, 0.0))]);
        let p = project_subspace(&h, 0b1111, &double_03()).unwrap();
        assert_eq!(p.h_sub, -CMatrix::identity(16, 16));
    }

    #[test]
    fn parity_folding_matches_full_image() {
        // qubits 0,3,4,5: spectators 1 and 2 sit inside the first gap
        let e = Excitation::double(
            [SpinOrbital::alpha(0), SpinOrbital::beta(1)],
            [SpinOrbital::alpha(2), SpinOrbital::beta(2)],
        );
        for reference in [0b001111u64, 0b001011, 0b001101, 0b001001] {
            let p = project_subspace(&PauliOperator::zero(6), reference, &e).unwrap();
            let direct = project_generator_directly(&e, 6, reference).unwrap();
            assert!((&p.a_sub - direct).camax() < 1e-15, "{reference:b}");
        }
        assert_eq!(parity_sign(&e, 0b1111), 1.0);
        assert_eq!(parity_sign(&e, 0b1011), -1.0);
        assert_eq!(parity_sign(&double_03(), 0b0111), 1.0);
    }

    #[test]
    fn propagator_is_exact() {
        let p = project_subspace(&PauliOperator::zero(6), 0b1111, &double_03()).unwrap();
        let a3 = &p.a_sub * &p.a_sub * &p.a_sub;
        assert!((a3 + &p.a_sub).camax() < 1e-15);
        let u = p.propagator(0.4);
        assert!((u.adjoint() * &u - CMatrix::identity(16, 16)).camax() < 1e-14);
    }
}
