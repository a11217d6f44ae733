use num_complex::Complex64;

use super::{inner, StateVector, MAX_SIM_QUBITS};
use crate::error::{invalid, GbefError, Result};
use crate::operator::PauliOperator;

/// Imaginary parts of expectation values above this are treated as a bug.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

/// Row-compressed matrix of a Pauli operator in the computational basis.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    n_qubits: usize,
    row_start: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<Complex64>,
}

impl SparseOperator {
    pub fn from_pauli(op: &PauliOperator) -> Result<Self> {
        let n = op.n_qubits();
        if n > MAX_SIM_QUBITS {
            return Err(invalid(format!("{n} qubits exceeds the simulator limit of {MAX_SIM_QUBITS}")));
        }
        // strings sharing an x-mask land on the same column for every row
        let mut by_x: std::collections::BTreeMap<u64, Vec<(u64, Complex64)>> = Default::default();
        for (s, c) in op.iter() {
            let phase = Complex64::i().powu((s.x_mask() & s.z_mask()).count_ones());
            by_x.entry(s.x_mask()).or_default().push((s.z_mask(), c * phase));
        }
        let dim = 1usize << n;
        let mut row_start = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        // H|b> = Σ_x (Σ_z c (−1)^{z·b}) |b ⊕ x>, so row r reads column r ⊕ x
        for r in 0..dim {
            for (&x, zs) in &by_x {
                let col = r ^ x as usize;
                let v: Complex64 =
                    zs.iter().map(|&(z, c)| if (z & col as u64).count_ones() % 2 == 1 { -c } else { c }).sum();
                if v.norm() > 0.0 {
                    cols.push(col as u32);
                    vals.push(v);
                }
            }
            row_start.push(cols.len());
        }
        Ok(Self { n_qubits: n, row_start, cols, vals })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn apply_raw(&self, amps: &[Complex64]) -> Vec<Complex64> {
        (0..amps.len())
            .map(|r| {
                (self.row_start[r]..self.row_start[r + 1]).map(|k| self.vals[k] * amps[self.cols[k] as usize]).sum()
            })
            .collect()
    }

    /// `H|ψ⟩` as raw amplitudes.
    pub fn apply(&self, state: &StateVector) -> Vec<Complex64> {
        self.apply_raw(state.amplitudes())
    }

    /// Matrix element `⟨row|H|col⟩`.
    pub fn element(&self, row: u64, col: u64) -> Complex64 {
        let r = row as usize;
        (self.row_start[r]..self.row_start[r + 1])
            .find(|&k| self.cols[k] as u64 == col)
            .map(|k| self.vals[k])
            .unwrap_or_default()
    }

    /// Non-zero entries of one row.
    pub fn row(&self, row: u64) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        let r = row as usize;
        (self.row_start[r]..self.row_start[r + 1]).map(move |k| (self.cols[k] as u64, self.vals[k]))
    }

    /// `⟨ψ|H|ψ⟩`, rejecting a noticeable imaginary part.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        self.check_register(state)?;
        real_part(inner(state.amplitudes(), &self.apply(state)))
    }

    pub(crate) fn check_register(&self, state: &StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(invalid(format!("state has {} qubits, operator {}", state.n_qubits(), self.n_qubits)));
        }
        Ok(())
    }
}

pub(crate) fn real_part(v: Complex64) -> Result<f64> {
    if v.im.abs() > IMAGINARY_TOLERANCE {
        return Err(GbefError::Numerical(format!("expectation value has imaginary part {:e}", v.im)));
    }
    Ok(v.re)
}

/// `⟨ψ|H|ψ⟩` term by term, without building a matrix.
pub fn expectation(state: &StateVector, h: &PauliOperator) -> Result<f64> {
    if state.n_qubits() != h.n_qubits() {
        return Err(invalid(format!("state has {} qubits, operator {}", state.n_qubits(), h.n_qubits())));
    }
    let amps = state.amplitudes();
    let mut total = Complex64::new(0.0, 0.0);
    for (s, c) in h.iter() {
        let x = s.x_mask() as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            acc += amps[b ^ x].conj() * s.basis_phase(b as u64) * a;
        }
        total += c * acc;
    }
    real_part(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::PauliString;

    #[test]
    fn identity_expectation() {
        let s = super::super::hartree_fock_state(3, 2).unwrap();
        let id = PauliOperator::identity(3, 1.0);
        assert_eq!(expectation(&s, &id).unwrap(), 1.0);
        assert_eq!(SparseOperator::from_pauli(&id).unwrap().expectation(&s).unwrap(), 1.0);
    }

    #[test]
    fn sparse_matches_term_loop() {
        let h = PauliOperator::from_terms(
            3,
            [
                (PauliString::from_label("XYZ").unwrap(), Complex64::new(0.3, 0.0)),
                (PauliString::from_label("YXZ").unwrap(), Complex64::new(0.3, 0.0)),
                (PauliString::from_label("ZIZ").unwrap(), Complex64::new(-0.7, 0.0)),
                (PauliString::from_label("IXX").unwrap(), Complex64::new(0.2, 0.0)),
            ],
        );
        let amps: Vec<Complex64> =
            (0..8).map(|k| Complex64::new(k as f64 * 0.1 + 0.05, 0.2 - k as f64 * 0.03)).collect();
        let s = StateVector::from_amplitudes(amps).unwrap();
        let sp = SparseOperator::from_pauli(&h).unwrap();
        let a = sp.expectation(&s).unwrap();
        let b = expectation(&s, &h).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_operator_is_flagged() {
        let h = PauliOperator::from_terms(1, [(PauliString::IDENTITY, Complex64::new(0.0, 1.0))]);
        let s = StateVector::basis(1, 0).unwrap();
        assert!(matches!(expectation(&s, &h), Err(GbefError::Numerical(_))));
    }
}
