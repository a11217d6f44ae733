//! Sorting, dual-threshold truncation, ansatz assembly and ablation.

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GradientRecord;
use crate::error::{invalid, Result};
use crate::operator::ParameterGroup;
use crate::statevector::{AnsatzBlock, AnsatzCircuit};

// JSON has no infinity; an absent threshold is written as null.
mod maybe_infinite {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// `abs` is a gradient floor in Hartree per radian; `mag` is the base-10
/// exponent of the adjacent-ratio cliff. Infinity disables a rule (`abs = ∞`
/// keeps nothing, `mag = ∞` never cuts).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    #[serde(with = "maybe_infinite")]
    pub abs: f64,
    #[serde(with = "maybe_infinite")]
    pub mag: f64,
}

impl Thresholds {
    pub fn new(abs: f64, mag: f64) -> Result<Self> {
        let t = Self { abs, mag };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.abs.is_nan() || self.abs < 0.0 || self.mag.is_nan() || self.mag < 0.0 {
            return Err(invalid(format!("thresholds must be non-negative, got abs={} mag={}", self.abs, self.mag)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropReason {
    BelowAbs,
    AfterMagCliff,
    /// Removed by the ablation search.
    Ablation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedGroup {
    pub group_id: usize,
    pub reason: DropReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    /// Descending by `abs_gradient`, ties by ascending group id.
    pub records: Vec<GradientRecord>,
    pub kept: Vec<usize>,
    pub dropped: Vec<DroppedGroup>,
    pub thresholds: Option<Thresholds>,
    pub warning: Option<String>,
}

impl SelectionReport {
    pub fn is_empty_selection(&self) -> bool {
        self.kept.is_empty()
    }

    pub fn n_groups(&self) -> usize {
        self.records.len()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Keeps the first `k` sorted records, marking the rest with `reason`.
    fn from_prefix(records: Vec<GradientRecord>, k: usize, reason: DropReason) -> Self {
        let kept = records[..k].iter().map(|r| r.group_id).collect();
        let dropped = records[k..].iter().map(|r| DroppedGroup { group_id: r.group_id, reason }).collect();
        Self { records, kept, dropped, thresholds: None, warning: None }
    }
}

/// Sorts descending by magnitude; ties go to the smaller group id.
pub fn sort_records(mut records: Vec<GradientRecord>) -> Result<Vec<GradientRecord>> {
    if let Some(r) = records.iter().find(|r| !r.gradient.is_finite()) {
        return Err(invalid(format!("group {} has non-finite gradient {}", r.group_id, r.gradient)));
    }
    records.sort_by(|a, b| b.abs_gradient.total_cmp(&a.abs_gradient).then(a.group_id.cmp(&b.group_id)));
    Ok(records)
}

/// Applies the absolute floor, then cuts at the first adjacent ratio of at
/// least `10^mag` among the survivors.
pub fn sort_truncate(records: Vec<GradientRecord>, t: Thresholds) -> Result<SelectionReport> {
    t.validate()?;
    let records = sort_records(records)?;
    let above = records.iter().take_while(|r| r.abs_gradient >= t.abs).count();
    let mut cut = above;
    if t.mag.is_finite() {
        let factor = 10f64.powf(t.mag);
        for i in 1..above {
            let (prev, next) = (records[i - 1].abs_gradient, records[i].abs_gradient);
            let cliff = if next == 0.0 { prev > 0.0 } else { prev / next >= factor };
            if cliff {
                cut = i;
                break;
            }
        }
    }
    let kept = records[..cut].iter().map(|r| r.group_id).collect::<Vec<_>>();
    let dropped = records[cut..]
        .iter()
        .enumerate()
        .map(|(i, r)| DroppedGroup {
            group_id: r.group_id,
            reason: if cut + i < above { DropReason::AfterMagCliff } else { DropReason::BelowAbs },
        })
        .collect();
    let warning = kept.is_empty().then(|| {
        format!("no group survived the thresholds (abs={}, mag={}); the ansatz is the bare reference", t.abs, t.mag)
    });
    Ok(SelectionReport { records, kept, dropped, thresholds: Some(t), warning })
}

/// Circuit over every member of the kept groups, in ascending group id order.
pub fn build_ansatz(
    report: &SelectionReport,
    groups: &[ParameterGroup],
    n_qubits: usize,
    n_electrons: usize,
) -> Result<AnsatzCircuit> {
    let by_id: HashMap<usize, &ParameterGroup> = groups.iter().map(|g| (g.id, g)).collect();
    let mut ids = report.kept.clone();
    ids.sort_unstable();
    ids.dedup();
    let blocks = ids
        .iter()
        .map(|id| {
            by_id
                .get(id)
                .map(|g| AnsatzBlock::from_group(g))
                .ok_or_else(|| invalid(format!("selection refers to unknown group {id}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let circuit = AnsatzCircuit { n_qubits, n_electrons, blocks };
    circuit.validate()?;
    Ok(circuit)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationOutcome {
    pub report: SelectionReport,
    /// False when even the full list misses the tolerance.
    pub feasible: bool,
    /// Error of the returned prefix, or of the full list when infeasible.
    pub error: f64,
    pub energy: f64,
    pub evaluations: usize,
}

/// Removes smallest-gradient groups one at a time from the full sorted list,
/// stopping before the first removal that pushes `|E − E_FCI|` to or above
/// `tolerance`. `vqe_runner` receives kept group ids in sorted-list order.
pub fn ablation_minimize<F>(
    records: Vec<GradientRecord>,
    mut vqe_runner: F,
    fci_energy: f64,
    tolerance: f64,
) -> Result<AblationOutcome>
where
    F: FnMut(&[usize]) -> Result<f64>,
{
    let records = sort_records(records)?;
    let ids: Vec<usize> = records.iter().map(|r| r.group_id).collect();
    let mut k = ids.len();
    let mut energy = vqe_runner(&ids)?;
    let mut error = (energy - fci_energy).abs();
    let mut evaluations = 1;
    if !(error < tolerance) {
        let mut report = SelectionReport::from_prefix(records, k, DropReason::Ablation);
        report.warning = Some(format!("full list misses the tolerance: error {error:e} Ha"));
        return Ok(AblationOutcome { report, feasible: false, error, energy, evaluations });
    }
    while k > 0 {
        let e = vqe_runner(&ids[..k - 1])?;
        evaluations += 1;
        let err = (e - fci_energy).abs();
        if !(err < tolerance) {
            break;
        }
        k -= 1;
        energy = e;
        error = err;
    }
    let report = SelectionReport::from_prefix(records, k, DropReason::Ablation);
    Ok(AblationOutcome { report, feasible: true, error, energy, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{Excitation, SpinOrbital};

    fn records(g: &[f64]) -> Vec<GradientRecord> {
        let e = Excitation::single(SpinOrbital::alpha(0), SpinOrbital::alpha(1));
        g.iter().enumerate().map(|(i, &v)| GradientRecord::new(i, e, v)).collect()
    }

    #[test]
    fn abs_rule() {
        let r = sort_truncate(records(&[0.5, -0.4, 0.001]), Thresholds::new(0.05, f64::INFINITY).unwrap()).unwrap();
        assert_eq!(r.kept, vec![0, 1]);
        assert_eq!(r.dropped, vec![DroppedGroup { group_id: 2, reason: DropReason::BelowAbs }]);
        assert!(r.warning.is_none());
    }

    #[test]
    fn mag_rule() {
        let r = sort_truncate(records(&[0.05, 0.5, 0.04, 0.49]), Thresholds::new(0.0, 0.5).unwrap()).unwrap();
        assert_eq!(r.kept, vec![1, 3]);
        assert!(r.dropped.iter().all(|d| d.reason == DropReason::AfterMagCliff));
    }

    #[test]
    fn ties_go_to_smaller_id() {
        let r = sort_truncate(records(&[0.2, -0.3, 0.3, 0.2]), Thresholds::new(0.0, f64::INFINITY).unwrap()).unwrap();
        let order: Vec<usize> = r.records.iter().map(|x| x.group_id).collect();
        assert_eq!(order, vec![1, 2, 0, 3]);
    }

    #[test]
    fn infinite_abs_is_an_empty_warning() {
        let r = sort_truncate(records(&[0.5, 0.1]), Thresholds::new(f64::INFINITY, 0.5).unwrap()).unwrap();
        assert!(r.is_empty_selection());
        assert!(r.warning.is_some());
        let back = SelectionReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn zero_gradients_after_a_nonzero_one_form_a_cliff() {
        let r = sort_truncate(records(&[0.1, 0.0, 0.0]), Thresholds::new(0.0, 3.0).unwrap()).unwrap();
        assert_eq!(r.kept, vec![0]);
    }

    #[test]
    fn invalid_thresholds_and_records() {
        assert!(Thresholds::new(-1.0, 0.0).is_err());
        assert!(sort_truncate(records(&[f64::NAN]), Thresholds::new(0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn ablation_stops_at_last_feasible_prefix() {
        // energy falls by the gradient of every kept group; FCI is the full sum
        let g = [0.3, 0.2, 0.001, 0.0005];
        let runner = |ids: &[usize]| Ok(-ids.iter().map(|&i| g[i]).sum::<f64>());
        let fci = -g.iter().sum::<f64>();
        let out = ablation_minimize(records(&g), runner, fci, 1.6e-3).unwrap();
        assert!(out.feasible);
        assert_eq!(out.report.kept, vec![0, 1]);
        assert_eq!(out.evaluations, 4);
        let all = ablation_minimize(records(&g), runner, fci, f64::INFINITY).unwrap();
        assert!(all.report.kept.is_empty());
        let none = ablation_minimize(records(&g), runner, fci - 1.0, 1.6e-3).unwrap();
        assert!(!none.feasible);
        assert_eq!(none.report.kept.len(), 4);
    }
}
