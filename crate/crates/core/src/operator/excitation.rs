//! Spin orbitals, single/double excitations and their anti-Hermitian generators.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::fermion::{FermionOperator, LadderOp};
use crate::error::{invalid, GbefError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Alpha,
    Beta,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Alpha => Spin::Beta,
            Spin::Beta => Spin::Alpha,
        }
    }
}

/// A spatial orbital paired with a spin flavour; qubit `2·spatial + spin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinOrbital {
    pub spatial: usize,
    pub spin: Spin,
}

impl SpinOrbital {
    pub fn new(spatial: usize, spin: Spin) -> Self {
        Self { spatial, spin }
    }

    pub fn alpha(spatial: usize) -> Self {
        Self::new(spatial, Spin::Alpha)
    }

    pub fn beta(spatial: usize) -> Self {
        Self::new(spatial, Spin::Beta)
    }

    pub fn from_qubit(q: usize) -> Self {
        Self::new(q / 2, if q.is_multiple_of(2) { Spin::Alpha } else { Spin::Beta })
    }

    #[inline]
    pub fn qubit(&self) -> usize {
        2 * self.spatial + if self.spin == Spin::Alpha { 0 } else { 1 }
    }
}

impl PartialOrd for SpinOrbital {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SpinOrbital {
    fn cmp(&self, other: &Self) -> Ordering {
        self.qubit().cmp(&other.qubit())
    }
}

impl fmt::Display for SpinOrbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.spin == Spin::Alpha { 'a' } else { 'b' };
        write!(f, "{}{}", self.spatial, s)
    }
}

/// A particle-hole excitation out of the reference determinant.
///
/// Canonical form keeps each pair in descending qubit order (`a > b`, `r > s`),
/// with generator `a†_r a†_s a_a a_b − h.c.`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Excitation {
    Single { from: SpinOrbital, to: SpinOrbital },
    Double { from: [SpinOrbital; 2], to: [SpinOrbital; 2] },
}

impl Excitation {
    pub fn single(from: SpinOrbital, to: SpinOrbital) -> Self {
        Excitation::Single { from, to }
    }

    /// Builds a double excitation, putting each pair in canonical order.
    pub fn double(from: [SpinOrbital; 2], to: [SpinOrbital; 2]) -> Self {
        let sort = |p: [SpinOrbital; 2]| if p[0] > p[1] { p } else { [p[1], p[0]] };
        Excitation::Double { from: sort(from), to: sort(to) }
    }

    pub fn is_single(&self) -> bool {
        matches!(self, Excitation::Single { .. })
    }

    pub fn rank(&self) -> usize {
        if self.is_single() {
            1
        } else {
            2
        }
    }

    pub fn annihilated(&self) -> Vec<SpinOrbital> {
        match self {
            Excitation::Single { from, .. } => vec![*from],
            Excitation::Double { from, .. } => from.to_vec(),
        }
    }

    pub fn created(&self) -> Vec<SpinOrbital> {
        match self {
            Excitation::Single { to, .. } => vec![*to],
            Excitation::Double { to, .. } => to.to_vec(),
        }
    }

    /// Qubits touched, ascending.
    pub fn qubits(&self) -> Vec<usize> {
        let mut q: Vec<usize> = self.annihilated().iter().chain(self.created().iter()).map(|o| o.qubit()).collect();
        q.sort_unstable();
        q
    }

    /// Index tuple `(from…, to…)` used for deterministic ordering.
    pub fn index_tuple(&self) -> Vec<usize> {
        self.annihilated().iter().chain(self.created().iter()).map(|o| o.qubit()).collect()
    }

    pub fn alpha_count(&self) -> usize {
        self.annihilated().iter().chain(self.created().iter()).filter(|o| o.spin == Spin::Alpha).count()
    }

    pub fn conserves_sz(&self) -> bool {
        let count = |v: Vec<SpinOrbital>| v.iter().filter(|o| o.spin == Spin::Alpha).count();
        count(self.annihilated()) == count(self.created())
    }

    /// Checks distinct orbitals and canonical pair ordering.
    pub fn validate(&self) -> Result<()> {
        let q = self.qubits();
        if q.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid(format!("excitation {self} repeats a spin orbital")));
        }
        if let Excitation::Double { from, to } = self {
            if from[0] < from[1] || to[0] < to[1] {
                return Err(invalid(format!("excitation {self} is not in canonical order")));
            }
        }
        Ok(())
    }

    /// `(creators, annihilators)` of the excitation part `T`, as qubit indices
    /// in the canonical order `a†_r a†_s a_a a_b`.
    pub fn ladder_indices(&self) -> (Vec<usize>, Vec<usize>) {
        let created = self.created().iter().map(|o| o.qubit()).collect();
        let annihilated = self.annihilated().iter().map(|o| o.qubit()).collect();
        (created, annihilated)
    }

    /// Ladder sequence of `T` (rightmost applied first).
    pub fn excitation_ops(&self) -> Vec<LadderOp> {
        let (c, a) = self.ladder_indices();
        c.into_iter().map(LadderOp::create).chain(a.into_iter().map(LadderOp::annihilate)).collect()
    }

    /// Ladder sequence of `T†`.
    pub fn deexcitation_ops(&self) -> Vec<LadderOp> {
        self.excitation_ops().iter().rev().map(|o| LadderOp { mode: o.mode, dagger: !o.dagger }).collect()
    }

    /// Action of `T − T†` on a determinant: `Some((sign, target))` when the
    /// determinant is connected, `None` when the generator annihilates it.
    pub fn act_on_determinant(&self, det: u64) -> Option<(f64, u64)> {
        if let Some((s, d)) = apply_ladder_sequence(&self.excitation_ops(), det) {
            return Some((s, d));
        }
        apply_ladder_sequence(&self.deexcitation_ops(), det).map(|(s, d)| (-s, d))
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Excitation::Single { from, to } => write!(f, "{from}->{to}"),
            Excitation::Double { from, to } => write!(f, "{},{}->{},{}", from[0], from[1], to[0], to[1]),
        }
    }
}

impl PartialOrd for Excitation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Excitation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| self.index_tuple().cmp(&other.index_tuple()))
    }
}

/// Applies ladder operators right to left to a determinant bitstring with the
/// Jordan-Wigner sign `(−1)^{occupied modes below p}`.
pub fn apply_ladder_sequence(ops: &[LadderOp], det: u64) -> Option<(f64, u64)> {
    let mut d = det;
    let mut sign = 1.0;
    for op in ops.iter().rev() {
        let bit = 1u64 << op.mode;
        let occupied = d & bit != 0;
        if op.dagger == occupied {
            return None;
        }
        if (d & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        d ^= bit;
    }
    Some((sign, d))
}

/// `T − T†` as a fermionic operator.
pub fn excitation_generator(e: &Excitation) -> FermionOperator {
    let mut op = FermionOperator::term(&e.excitation_ops(), 1.0);
    let deex = FermionOperator::term(&e.deexcitation_ops(), -1.0);
    op = &op + &deex;
    op
}

/// All Sz-conserving singles and doubles of a closed-shell reference, singles
/// first, each block in ascending index-tuple order.
pub fn enumerate_excitations(n_spatial: usize, n_electrons: usize) -> Result<Vec<Excitation>> {
    if !n_electrons.is_multiple_of(2) {
        return Err(GbefError::Unsupported(format!("open-shell reference with {n_electrons} electrons")));
    }
    if n_electrons > 2 * n_spatial {
        return Err(invalid(format!("{n_electrons} electrons do not fit in {n_spatial} spatial orbitals")));
    }
    let n_qubits = 2 * n_spatial;
    let occupied: Vec<SpinOrbital> = (0..n_electrons).map(SpinOrbital::from_qubit).collect();
    let virtuals: Vec<SpinOrbital> = (n_electrons..n_qubits).map(SpinOrbital::from_qubit).collect();

    let mut singles = Vec::new();
    for &a in &occupied {
        for &r in &virtuals {
            if a.spin == r.spin {
                singles.push(Excitation::single(a, r));
            }
        }
    }
    let mut doubles = Vec::new();
    for (i, &b) in occupied.iter().enumerate() {
        for &a in &occupied[i + 1..] {
            for (j, &s) in virtuals.iter().enumerate() {
                for &r in &virtuals[j + 1..] {
                    let e = Excitation::double([a, b], [r, s]);
                    if e.conserves_sz() {
                        doubles.push(e);
                    }
                }
            }
        }
    }
    singles.sort();
    doubles.sort();
    singles.extend(doubles);
    Ok(singles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let h2 = enumerate_excitations(2, 2).unwrap();
        assert_eq!(h2.iter().filter(|e| e.is_single()).count(), 2);
        assert_eq!(h2.len(), 3);
        let h4 = enumerate_excitations(4, 4).unwrap();
        assert_eq!(h4.iter().filter(|e| e.is_single()).count(), 8);
        assert_eq!(h4.iter().filter(|e| !e.is_single()).count(), 18);
        assert!(enumerate_excitations(2, 4).unwrap().is_empty());
    }

    #[test]
    fn open_shell_is_unsupported() {
        assert!(matches!(enumerate_excitations(3, 3), Err(GbefError::Unsupported(_))));
    }

    #[test]
    fn generator_examples() {
        let single = Excitation::single(SpinOrbital::alpha(0), SpinOrbital::alpha(1));
        let expected =
            &FermionOperator::from_indices(&[2], &[0], 1.0) - &FermionOperator::from_indices(&[0], &[2], 1.0);
        assert_eq!(excitation_generator(&single), expected);

        let double = Excitation::double(
            [SpinOrbital::alpha(0), SpinOrbital::beta(0)],
            [SpinOrbital::alpha(1), SpinOrbital::beta(1)],
        );
        let expected = &FermionOperator::from_indices(&[2, 3], &[0, 1], 1.0)
            - &FermionOperator::from_indices(&[0, 1], &[2, 3], 1.0);
        let gen = excitation_generator(&double);
        assert_eq!(gen, expected);
        assert_eq!(gen.len(), 2);
        assert!((&gen + &gen.dagger()).is_empty());
    }

    #[test]
    fn canonical_order_is_enforced() {
        let e = Excitation::Double {
            from: [SpinOrbital::alpha(0), SpinOrbital::beta(0)],
            to: [SpinOrbital::beta(1), SpinOrbital::alpha(1)],
        };
        assert!(e.validate().is_err());
        let dup = Excitation::Double {
            from: [SpinOrbital::alpha(0), SpinOrbital::alpha(0)],
            to: [SpinOrbital::beta(1), SpinOrbital::alpha(1)],
        };
        assert!(dup.validate().is_err());
    }

    #[test]
    fn determinant_action_matches_generator_on_hf() {
        let double = Excitation::double(
            [SpinOrbital::alpha(0), SpinOrbital::beta(0)],
            [SpinOrbital::alpha(1), SpinOrbital::beta(1)],
        );
        // a†_3 a†_2 a_1 a_0 on |0011> (qubits 0,1 occupied)
        let (sign, det) = double.act_on_determinant(0b0011).unwrap();
        assert_eq!(det, 0b1100);
        // a†_3 a†_2 a_1 a_0: only a†_3 passes an occupied mode (q2)
        assert_eq!(sign, -1.0);
        let (back, det0) = double.act_on_determinant(0b1100).unwrap();
        assert_eq!(det0, 0b0011);
        assert_eq!(back, 1.0);
        assert!(double.act_on_determinant(0b0101).is_none());
    }
}
