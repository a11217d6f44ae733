//! Exact diagonalization in a fixed particle-number and Sz sector.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, GbefError, Result};
use crate::statevector::{SparseOperator, StateVector};

/// Largest acceptable `‖Hv − Ev‖`.
pub const FCI_RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FciResult {
    pub energy: f64,
    /// Sector basis as qubit bitstrings, ascending.
    pub determinants: Vec<u64>,
    /// Ground vector in that basis, normalized, largest entry positive.
    pub coefficients: Vec<f64>,
    pub dimension: usize,
    pub residual: f64,
}

impl FciResult {
    pub fn coefficient(&self, det: u64) -> f64 {
        self.determinants.binary_search(&det).map(|i| self.coefficients[i]).unwrap_or(0.0)
    }

    pub fn to_state(&self, n_qubits: usize) -> Result<StateVector> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        for (d, c) in self.determinants.iter().zip(&self.coefficients) {
            amps[*d as usize] = Complex64::new(*c, 0.0);
        }
        StateVector::from_amplitudes(amps)
    }
}

/// Bitstrings with `n_electrons` set bits and `ms2 = N_α − N_β` under the
/// interleaved layout (even qubits α).
pub fn sector_determinants(n_qubits: usize, n_electrons: usize, ms2: i64) -> Vec<u64> {
    let alpha_mask = (0..n_qubits).step_by(2).fold(0u64, |m, q| m | 1 << q);
    (0..1u64 << n_qubits)
        .filter(|d| d.count_ones() as usize == n_electrons)
        .filter(|d| {
            let na = (d & alpha_mask).count_ones() as i64;
            let nb = (d & !alpha_mask).count_ones() as i64;
            na - nb == ms2
        })
        .collect()
}

pub fn fci_ground_state(h: &SparseOperator, n_electrons: usize, ms2: i64) -> Result<FciResult> {
    let dets = sector_determinants(h.n_qubits(), n_electrons, ms2);
    let dim = dets.len();
    if dim == 0 {
        return Err(invalid(format!("empty sector: {n_electrons} electrons, 2Sz = {ms2}")));
    }
    let index: HashMap<u64, usize> = dets.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for (i, &d) in dets.iter().enumerate() {
        for (col, v) in h.row(d) {
            match index.get(&col) {
                Some(&j) => {
                    if v.im.abs() > 1e-12 {
                        return Err(GbefError::Numerical(format!("complex matrix element {v} in FCI sector")));
                    }
                    m[(i, j)] = v.re;
                }
                None if v.norm() > 1e-12 => {
                    return Err(GbefError::Numerical(format!(
                        "Hamiltonian couples determinant {d:b} out of its sector to {col:b}"
                    )));
                }
                None => {}
            }
        }
    }
    let asym = (&m - m.transpose()).amax();
    if asym > 1e-10 {
        return Err(GbefError::Numerical(format!("sector matrix is not symmetric (max {asym:e})")));
    }
    let sym = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym.clone());
    let k = eig.eigenvalues.imin();
    let energy = eig.eigenvalues[k];
    let mut v = eig.eigenvectors.column(k).into_owned();
    v /= v.norm();
    let imax = v.iamax();
    if v[imax] < 0.0 {
        v = -v;
    }
    let residual = (&sym * &v - &v * energy).norm();
    if residual > FCI_RESIDUAL_TOLERANCE {
        return Err(GbefError::Numerical(format!("FCI residual {residual:e} above tolerance")));
    }
    Ok(FciResult { energy, determinants: dets, coefficients: v.iter().copied().collect(), dimension: dim, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::PauliOperator;

    #[test]
    fn sector_sizes() {
        assert_eq!(sector_determinants(8, 4, 0).len(), 36);
        assert_eq!(sector_determinants(4, 2, 0).len(), 4);
        assert_eq!(sector_determinants(4, 2, 2).len(), 1);
    }

    #[test]
    fn identity_with_core() {
        let h = SparseOperator::from_pauli(&PauliOperator::identity(4, 2.0)).unwrap();
        for (n, ms2) in [(0, 0), (2, 0), (3, 1), (4, 0)] {
            let r = fci_ground_state(&h, n, ms2).unwrap();
            assert!((r.energy - 2.0).abs() < 1e-14);
        }
        assert!(fci_ground_state(&h, 2, 4).is_err());
    }
}
