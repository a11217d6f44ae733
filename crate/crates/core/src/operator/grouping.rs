//! Closed-shell spin-adapted parameter groups.
//!
//! Groups follow the singlet generators `E_ai` and `E_ai E_bj − h.c.` with
//! `E_ai = Σ_σ a†_{aσ} a_{iσ}` over spatial occupied `i, j` and virtual `a, b`.
//! A same-spin double such as `iα jα → aα bα` is driven by both pairings
//! `(i→a, j→b)` and `(i→b, j→a)`, so it sits in two groups with the amplitude
//! being the sum of the two parameters. Every group still owns at least one
//! excitation no other group touches; that one is its representative.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::excitation::{enumerate_excitations, excitation_generator, Excitation, Spin, SpinOrbital};
use super::fermion::FermionOperator;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupLabel {
    Single,
    /// `i i → a a`: one paired excitation.
    DoublesSingletLike,
    /// `i j → a b` with `i ≠ j` and `a ≠ b`: two mixed-spin members plus the
    /// shared same-spin members.
    DoublesTripletLike,
    /// `i i → a b` or `i j → a a`: two mixed-spin members of opposite weight.
    ZeroSumPair,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupLabel::Single => "single",
            GroupLabel::DoublesSingletLike => "doubles-singlet-like",
            GroupLabel::DoublesTripletLike => "doubles-triplet-like",
            GroupLabel::ZeroSumPair => "zero-sum-pair",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMember {
    pub excitation: Excitation,
    pub weight: f64,
}

/// One free parameter and the excitations it drives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterGroup {
    pub id: usize,
    pub label: GroupLabel,
    pub members: Vec<GroupMember>,
    pub representative: Excitation,
}

impl ParameterGroup {
    /// `G = Σ_j w_j (T_j − T_j†)`.
    pub fn generator(&self) -> FermionOperator {
        let mut g = FermionOperator::zero();
        for m in &self.members {
            g = &g + &excitation_generator(&m.excitation).scale(m.weight);
        }
        g
    }

    pub fn weight_of(&self, e: &Excitation) -> Option<f64> {
        self.members.iter().find(|m| &m.excitation == e).map(|m| m.weight)
    }

    pub fn is_double(&self) -> bool {
        self.label != GroupLabel::Single
    }

    pub fn member_pairs(&self) -> Vec<(Excitation, f64)> {
        self.members.iter().map(|m| (m.excitation, m.weight)).collect()
    }
}

/// Closed-form free-parameter count for a closed shell with `n_o` occupied
/// and `n_v` virtual spatial orbitals.
pub fn spin_adapted_group_count(n_o: usize, n_v: usize) -> usize {
    let pairs = |n: usize| n * (n + 1) / 2;
    let distinct = |n: usize| n * n.saturating_sub(1) / 2;
    n_o * n_v + pairs(n_o) * pairs(n_v) + distinct(n_o) * distinct(n_v)
}

fn permutation_sign(first: SpinOrbital, second: SpinOrbital) -> f64 {
    if first > second {
        1.0
    } else {
        -1.0
    }
}

/// Members of `E_ai E_bj − h.c.` keyed by canonical excitation, unnormalized.
fn pair_members(i: usize, a: usize, j: usize, b: usize) -> BTreeMap<Excitation, f64> {
    let mut out = BTreeMap::new();
    for sigma in [Spin::Alpha, Spin::Beta] {
        for tau in [Spin::Alpha, Spin::Beta] {
            let x = SpinOrbital::new(a, sigma);
            let y = SpinOrbital::new(b, tau);
            let u = SpinOrbital::new(i, sigma);
            let w = SpinOrbital::new(j, tau);
            if x == y || u == w {
                continue;
            }
            // a†_x a_u a†_y a_w = −a†_x a†_y a_u a_w, then reorder each pair
            let weight = -permutation_sign(x, y) * permutation_sign(u, w);
            *out.entry(Excitation::double([u, w], [x, y])).or_insert(0.0) += weight;
        }
    }
    out.retain(|_, w| *w != 0.0);
    out
}

fn infer_shape(excitations: &[Excitation]) -> Result<(usize, usize)> {
    let mut n_o = 0;
    let mut n_spatial = 0;
    for e in excitations {
        for o in e.annihilated() {
            n_o = n_o.max(o.spatial + 1);
        }
        for o in e.created() {
            n_spatial = n_spatial.max(o.spatial + 1);
        }
    }
    if n_spatial <= n_o {
        return Err(invalid("excitations do not reach any virtual orbital"));
    }
    Ok((n_o, n_spatial))
}

/// Groups a complete closed-shell excitation list into spin-adapted parameters.
///
/// Group ids run over singles `(i, a)` in lexicographic order, then over
/// unordered pairs of those singles. The input must be exactly the list
/// produced by [`enumerate_excitations`] for some closed shell, in any order.
pub fn group_spin_adapted(excitations: &[Excitation]) -> Result<Vec<ParameterGroup>> {
    if excitations.is_empty() {
        return Ok(Vec::new());
    }
    let mut seen = HashSet::new();
    for e in excitations {
        e.validate()?;
        if !e.conserves_sz() {
            return Err(invalid(format!("excitation {e} does not conserve Sz")));
        }
        if !seen.insert(*e) {
            return Err(invalid(format!("duplicate excitation {e}")));
        }
    }
    let (n_o, n_spatial) = infer_shape(excitations)?;
    let expected: HashSet<Excitation> = enumerate_excitations(n_spatial, 2 * n_o)?.into_iter().collect();
    if let Some(e) = excitations.iter().find(|e| !expected.contains(e)) {
        return Err(invalid(format!("excitation {e} is not a closed-shell particle-hole excitation")));
    }
    if seen.len() != expected.len() {
        return Err(invalid(format!("incomplete excitation list: {} of {} present", seen.len(), expected.len())));
    }

    let spatial_singles: Vec<(usize, usize)> = (0..n_o).flat_map(|i| (n_o..n_spatial).map(move |a| (i, a))).collect();

    let mut raw: Vec<(GroupLabel, Vec<GroupMember>)> = Vec::new();
    for &(i, a) in &spatial_singles {
        let members = [Spin::Alpha, Spin::Beta]
            .iter()
            .map(|&s| GroupMember {
                excitation: Excitation::single(SpinOrbital::new(i, s), SpinOrbital::new(a, s)),
                weight: 1.0,
            })
            .collect();
        raw.push((GroupLabel::Single, members));
    }
    for s in 0..spatial_singles.len() {
        for t in s..spatial_singles.len() {
            let (i, a) = spatial_singles[s];
            let (j, b) = spatial_singles[t];
            let label = match (i == j, a == b) {
                (true, true) => GroupLabel::DoublesSingletLike,
                (false, false) => GroupLabel::DoublesTripletLike,
                _ => GroupLabel::ZeroSumPair,
            };
            let members = pair_members(i, a, j, b);
            let scale = members.values().fold(0.0f64, |m, w| m.max(w.abs()));
            let members =
                members.into_iter().map(|(excitation, w)| GroupMember { excitation, weight: w / scale }).collect();
            raw.push((label, members));
        }
    }

    let mut owners: HashMap<Excitation, usize> = HashMap::new();
    for (_, members) in &raw {
        for m in members {
            *owners.entry(m.excitation).or_insert(0) += 1;
        }
    }
    raw.into_iter()
        .enumerate()
        .map(|(id, (label, members))| {
            let representative = members
                .iter()
                .map(|m| m.excitation)
                .filter(|e| owners[e] == 1)
                .min_by(|x, y| {
                    y.alpha_count().cmp(&x.alpha_count()).then_with(|| x.index_tuple().cmp(&y.index_tuple()))
                })
                .ok_or_else(|| invalid(format!("group {id} has no exclusive excitation")))?;
            Ok(ParameterGroup { id, label, members, representative })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups(n_spatial: usize, n_electrons: usize) -> Vec<ParameterGroup> {
        group_spin_adapted(&enumerate_excitations(n_spatial, n_electrons).unwrap()).unwrap()
    }

    #[test]
    fn h2_has_one_single_and_one_double() {
        let g = groups(2, 2);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].label, GroupLabel::Single);
        assert_eq!(g[1].label, GroupLabel::DoublesSingletLike);
        assert_eq!(g[1].members.len(), 1);
    }

    #[test]
    fn h4_labels() {
        let g = groups(4, 4);
        assert_eq!(g.len(), 14);
        let count = |l| g.iter().filter(|x| x.label == l).count();
        assert_eq!(count(GroupLabel::Single), 4);
        assert_eq!(count(GroupLabel::DoublesSingletLike), 4);
        assert_eq!(count(GroupLabel::ZeroSumPair), 4);
        assert_eq!(count(GroupLabel::DoublesTripletLike), 2);
        for z in g.iter().filter(|x| x.label == GroupLabel::ZeroSumPair) {
            let sum: f64 = z.members.iter().map(|m| m.weight).sum();
            assert_eq!(z.members.len(), 2);
            assert_eq!(sum, 0.0);
        }
    }

    #[test]
    fn closed_form_counts() {
        assert_eq!(spin_adapted_group_count(1, 1), 2);
        assert_eq!(spin_adapted_group_count(2, 2), 14);
        assert_eq!(spin_adapted_group_count(5, 2), 65);
    }

    #[test]
    fn representatives_are_exclusive_members() {
        let g = groups(4, 4);
        for grp in &g {
            assert!(grp.weight_of(&grp.representative).is_some());
            let others = g.iter().filter(|o| o.weight_of(&grp.representative).is_some()).count();
            assert_eq!(others, 1, "group {}", grp.id);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let mut ex = enumerate_excitations(2, 2).unwrap();
        ex.push(ex[0]);
        assert!(group_spin_adapted(&ex).is_err());
        let ex = enumerate_excitations(3, 2).unwrap();
        assert!(group_spin_adapted(&ex[1..]).is_err());
    }
}
