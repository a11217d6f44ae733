//! Gradient screening of spin-adapted parameter groups at the HF point.

mod selection;
mod subspace;

pub use selection::{
    ablation_minimize, build_ansatz, sort_records, sort_truncate, AblationOutcome, DropReason, DroppedGroup,
    SelectionReport, Thresholds,
};
pub use subspace::{
    parity_sign, project_generator_directly, project_operator, project_subspace, subspace_energy, subspace_gradient,
    CMatrix, GradientRecord, SubspaceProblem,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::operator::{Excitation, ParameterGroup, PauliOperator};
use crate::statevector::{hartree_fock_state, CompiledExcitation, SparseOperator};

/// One gradient per group, from its representative's compressed problem.
/// Output order follows `groups`.
pub fn screen(h: &PauliOperator, reference: u64, groups: &[ParameterGroup]) -> Result<Vec<GradientRecord>> {
    groups
        .par_iter()
        .map(|g| {
            let p = project_subspace(h, reference, &g.representative)?;
            Ok(GradientRecord::new(g.id, g.representative, p.gradient()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberGradient {
    pub excitation: Excitation,
    pub weight: f64,
    pub gradient: f64,
}

/// Per-member gradients of a group next to its full-register generator
/// gradient `⟨HF|[H, Σ w_j A_j]|HF⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDiagnostic {
    pub group_id: usize,
    pub representative_gradient: f64,
    pub members: Vec<MemberGradient>,
    pub group_gradient: f64,
}

/// Diagnostic pass; leaves screening results untouched.
pub fn member_diagnostics(
    h: &PauliOperator,
    n_electrons: usize,
    groups: &[ParameterGroup],
) -> Result<Vec<GroupDiagnostic>> {
    let n = h.n_qubits();
    let reference = crate::statevector::hartree_fock_bits(n_electrons);
    let sparse = SparseOperator::from_pauli(h)?;
    let hf = hartree_fock_state(n, n_electrons)?;
    let h_hf = sparse.apply(&hf);
    groups
        .par_iter()
        .map(|g| {
            let mut members = Vec::with_capacity(g.members.len());
            let mut group_gradient = 0.0;
            for m in &g.members {
                let gradient = project_subspace(h, reference, &m.excitation)?.gradient();
                // ⟨ψ|[H, A]|ψ⟩ = 2 Re ⟨Hψ|Aψ⟩ for anti-Hermitian A
                let a_hf = CompiledExcitation::new(&m.excitation, n)?.apply(hf.amplitudes());
                let full: f64 = 2.0 * h_hf.iter().zip(&a_hf).map(|(x, y)| (x.conj() * y).re).sum::<f64>();
                group_gradient += m.weight * full;
                members.push(MemberGradient { excitation: m.excitation, weight: m.weight, gradient });
            }
            let representative_gradient =
                members.iter().find(|m| m.excitation == g.representative).map(|m| m.gradient).unwrap_or_default();
            Ok(GroupDiagnostic { group_id: g.id, representative_gradient, members, group_gradient })
        })
        .collect()
}
