//! Jordan-Wigner encoding.
//!
//! `a†_p = ½ (X_p − i Y_p) Z_{p−1} ⋯ Z_0` and `a_p = ½ (X_p + i Y_p) Z_{p−1} ⋯ Z_0`,
//! so `a†_p a_p = ½ (I − Z_p)` and an occupied qubit has `Z = −1`.

use num_complex::Complex64;

use super::fermion::{FermionOperator, LadderOp};
use super::pauli::{PauliOperator, PauliString, MAX_QUBITS};
use crate::error::{invalid, Result};

/// Image of one ladder operator as two `(string, coefficient)` branches.
pub fn ladder_image(op: LadderOp) -> [(PauliString, Complex64); 2] {
    let below = if op.mode == 0 { 0 } else { (1u64 << op.mode) - 1 };
    let bit = 1u64 << op.mode;
    let x_branch = PauliString::new(bit, below);
    let y_branch = PauliString::new(bit, below | bit);
    let y_coeff = if op.dagger { Complex64::new(0.0, -0.5) } else { Complex64::new(0.0, 0.5) };
    [(x_branch, Complex64::new(0.5, 0.0)), (y_branch, y_coeff)]
}

/// Expands one product of ladder operators into Pauli strings.
pub fn term_image(ops: &[LadderOp]) -> Vec<(PauliString, Complex64)> {
    let mut acc = vec![(PauliString::IDENTITY, Complex64::new(1.0, 0.0))];
    for &op in ops {
        let branches = ladder_image(op);
        let mut next = Vec::with_capacity(acc.len() * 2);
        for (s, c) in &acc {
            for (b, cb) in &branches {
                let (ph, prod) = s.mul(b);
                next.push((prod, c * cb * ph.to_complex()));
            }
        }
        acc = next;
    }
    acc
}

pub fn jordan_wigner(op: &FermionOperator, n_qubits: usize) -> Result<PauliOperator> {
    if n_qubits > MAX_QUBITS {
        return Err(invalid(format!("{n_qubits} qubits exceeds the {MAX_QUBITS}-qubit mask width")));
    }
    if let Some(m) = op.max_mode() {
        if m >= n_qubits {
            return Err(invalid(format!("mode {m} out of range for {n_qubits} qubits")));
        }
    }
    let mut out = PauliOperator::zero(n_qubits);
    for (t, c) in op.iter() {
        for (s, cs) in term_image(t) {
            out.add_term(s, cs * *c);
        }
    }
    out.simplify();
    Ok(out)
}
