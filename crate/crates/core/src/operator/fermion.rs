//! Second-quantized fermionic operators.
//!
//! Every operator is kept in normal order: creators before annihilators, each
//! block sorted by ascending mode index. Anti-commutation is applied while
//! ordering, so two operators are equal exactly when their term maps are.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Coefficients below this are dropped after normal ordering.
pub const FERMION_DROP_TOLERANCE: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LadderOp {
    pub mode: usize,
    pub dagger: bool,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, dagger: false }
    }
}

/// Product of ladder operators, applied right to left.
pub type FermionTerm = Vec<LadderOp>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FermionOperator {
    terms: BTreeMap<FermionTerm, f64>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity(coeff: f64) -> Self {
        let mut op = Self::zero();
        op.add_term(Vec::new(), coeff);
        op
    }

    /// A single product term, normal ordered on insertion.
    pub fn term(ops: &[LadderOp], coeff: f64) -> Self {
        let mut op = Self::zero();
        op.add_term(ops.to_vec(), coeff);
        op
    }

    /// `a†_{c0} a†_{c1} ... a_{a0} a_{a1} ...` with the given coefficient.
    pub fn from_indices(creators: &[usize], annihilators: &[usize], coeff: f64) -> Self {
        let ops: Vec<LadderOp> = creators
            .iter()
            .map(|&m| LadderOp::create(m))
            .chain(annihilators.iter().map(|&m| LadderOp::annihilate(m)))
            .collect();
        Self::term(&ops, coeff)
    }

    pub fn add_term(&mut self, ops: FermionTerm, coeff: f64) {
        for (t, c) in normal_order_term(ops, coeff) {
            let entry = self.terms.entry(t.clone()).or_insert(0.0);
            *entry += c;
            if entry.abs() < FERMION_DROP_TOLERANCE {
                self.terms.remove(&t);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FermionTerm, &f64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, ops: &[LadderOp]) -> f64 {
        self.terms.get(ops).copied().unwrap_or(0.0)
    }

    /// Constant (identity) part.
    pub fn constant(&self) -> f64 {
        self.coefficient(&[])
    }

    /// Largest mode index referenced, if any.
    pub fn max_mode(&self) -> Option<usize> {
        self.terms.keys().flat_map(|t| t.iter().map(|o| o.mode)).max()
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            let conj: Vec<LadderOp> = t.iter().rev().map(|o| LadderOp { mode: o.mode, dagger: !o.dagger }).collect();
            out.add_term(conj, *c);
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * factor);
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self - &self.dagger()).max_abs_coefficient() <= tol
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

/// Normal orders one product, returning the resulting terms.
///
/// Creators move left of annihilators (`a_p a†_q = δ_pq − a†_q a_p`), each
/// block is sorted ascending with a sign per transposition, and any term with
/// a repeated creator or annihilator vanishes.
fn normal_order_term(ops: FermionTerm, coeff: f64) -> Vec<(FermionTerm, f64)> {
    let mut out = Vec::new();
    let mut stack = vec![(ops, coeff)];
    'next: while let Some((mut t, mut c)) = stack.pop() {
        // insertion sort with anticommutation
        for i in 1..t.len() {
            let mut j = i;
            while j > 0 {
                let left = t[j - 1];
                let right = t[j];
                if !left.dagger && right.dagger {
                    if left.mode == right.mode {
                        let mut contracted = t.clone();
                        contracted.drain(j - 1..=j);
                        stack.push((contracted, c));
                    }
                    t.swap(j - 1, j);
                    c = -c;
                } else if left.dagger == right.dagger {
                    if left.mode == right.mode {
                        continue 'next;
                    }
                    if right.mode < left.mode {
                        t.swap(j - 1, j);
                        c = -c;
                    } else {
                        break;
                    }
                } else {
                    break;
                }
                j -= 1;
            }
        }
        out.push((t, c));
    }
    out
}

impl Add for &FermionOperator {
    type Output = FermionOperator;
    fn add(self, rhs: &FermionOperator) -> FermionOperator {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            *out.terms.entry(t.clone()).or_insert(0.0) += c;
        }
        out.terms.retain(|_, c| c.abs() >= FERMION_DROP_TOLERANCE);
        out
    }
}

impl Sub for &FermionOperator {
    type Output = FermionOperator;
    fn sub(self, rhs: &FermionOperator) -> FermionOperator {
        self + &(-rhs)
    }
}

impl Neg for &FermionOperator {
    type Output = FermionOperator;
    fn neg(self) -> FermionOperator {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }
}

impl Mul for &FermionOperator {
    type Output = FermionOperator;
    fn mul(self, rhs: &FermionOperator) -> FermionOperator {
        let mut out = FermionOperator::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let mut t = a.clone();
                t.extend_from_slice(b);
                out.add_term(t, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c:+}")?;
            if t.is_empty() {
                write!(f, " I")?;
            }
            for o in t {
                write!(f, " a{}_{}", if o.dagger { "†" } else { "" }, o.mode)?;
            }
        }
        Ok(())
    }
}
