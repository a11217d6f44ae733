//! Bitmask Pauli strings and sparse Pauli-sum operators.
//!
//! A string is stored as an `(x, z)` mask pair: qubit `q` carries `X` when only
//! the x bit is set, `Z` when only the z bit is set and `Y` when both are set.
//! Strings themselves are always Hermitian; phases produced by multiplication
//! are returned separately and folded into operator coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coefficients with modulus below this are dropped by [`PauliOperator::simplify`].
pub const DROP_TOLERANCE: f64 = 1e-14;

/// Maximum register width representable by the `u64` masks.
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// A power of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_power(power: u32) -> Self {
        match power % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Phase::PlusOne => Complex64::new(1.0, 0.0),
            Phase::PlusI => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }
}

#[inline]
fn i_pow(power: u32) -> Complex64 {
    Phase::from_power(power).to_complex()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct PauliString {
    x: u64,
    z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn new(x_mask: u64, z_mask: u64) -> Self {
        Self { x: x_mask, z: z_mask }
    }

    pub fn single(qubit: usize, pauli: Pauli) -> Self {
        let bit = 1u64 << qubit;
        match pauli {
            Pauli::I => Self::IDENTITY,
            Pauli::X => Self::new(bit, 0),
            Pauli::Y => Self::new(bit, bit),
            Pauli::Z => Self::new(0, bit),
        }
    }

    /// Builds a string from `(qubit, pauli)` pairs; later entries on the same
    /// qubit overwrite earlier ones.
    pub fn from_ops(ops: &[(usize, Pauli)]) -> Self {
        let mut s = Self::IDENTITY;
        for &(q, p) in ops {
            let bit = 1u64 << q;
            s.x &= !bit;
            s.z &= !bit;
            let t = Self::single(q, p);
            s.x |= t.x;
            s.z |= t.z;
        }
        s
    }

    /// Parses a label such as `"XIZY"`, qubit 0 first.
    pub fn from_label(label: &str) -> Option<Self> {
        let mut ops = Vec::new();
        for (q, c) in label.chars().enumerate() {
            let p = match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return None,
            };
            ops.push((q, p));
        }
        Some(Self::from_ops(&ops))
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn pauli_at(&self, qubit: usize) -> Pauli {
        let xb = (self.x >> qubit) & 1 == 1;
        let zb = (self.z >> qubit) & 1 == 1;
        match (xb, zb) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// `self * other = phase * result`.
    pub fn mul(&self, other: &PauliString) -> (Phase, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // sigma(x, z) = i^{x.z} X^x Z^z per qubit; reorder Z^{z1} X^{x2}.
        let power = (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - (x & z).count_ones();
        (Phase::from_power(power), PauliString { x, z })
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Action on a computational basis state: `P|b> = phase |b ^ x>`.
    #[inline]
    pub fn apply_to_basis(&self, basis: u64) -> (Complex64, u64) {
        (self.basis_phase(basis), basis ^ self.x)
    }

    /// The phase in `P|b> = phase |b ^ x>`.
    #[inline]
    pub fn basis_phase(&self, basis: u64) -> Complex64 {
        let mut ph = i_pow((self.x & self.z).count_ones());
        if (self.z & basis).count_ones() % 2 == 1 {
            ph = -ph;
        }
        ph
    }

    /// Label over `n_qubits`, qubit 0 first.
    pub fn label(&self, n_qubits: usize) -> String {
        (0..n_qubits)
            .map(|q| match self.pauli_at(q) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            })
            .collect()
    }

    /// Restricts the string to the listed qubits, relabelled `0..qubits.len()`.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::IDENTITY;
        for (local, &q) in qubits.iter().enumerate() {
            out.x |= ((self.x >> q) & 1) << local;
            out.z |= ((self.z >> q) & 1) << local;
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for q in 0..MAX_QUBITS {
            let p = self.pauli_at(q);
            if p == Pauli::I {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let c = match p {
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
                Pauli::I => unreachable!(),
            };
            write!(f, "{c}{q}")?;
        }
        Ok(())
    }
}

/// A linear combination of Pauli strings on a fixed register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliOperator {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliOperator {
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "register wider than {MAX_QUBITS} qubits");
        Self { n_qubits, terms: BTreeMap::new() }
    }

    pub fn identity(n_qubits: usize, coeff: f64) -> Self {
        let mut op = Self::zero(n_qubits);
        op.add_term(PauliString::IDENTITY, Complex64::new(coeff, 0.0));
        op
    }

    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = (PauliString, Complex64)>) -> Self {
        let mut op = Self::zero(n_qubits);
        for (s, c) in terms {
            op.add_term(s, c);
        }
        op.simplify();
        op
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    /// Accumulates without simplifying.
    pub fn add_term(&mut self, s: PauliString, coeff: Complex64) {
        debug_assert!(s.support() >> self.n_qubits == 0 || self.n_qubits == MAX_QUBITS);
        *self.terms.entry(s).or_default() += coeff;
    }

    /// Drops coefficients below [`DROP_TOLERANCE`].
    pub fn simplify(&mut self) {
        self.terms.retain(|_, c| c.norm() >= DROP_TOLERANCE);
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.simplify();
        out
    }

    pub fn dagger(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    pub fn commutator(&self, other: &PauliOperator) -> PauliOperator {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &PauliOperator) -> PauliOperator {
        &(self * other) + &(other * self)
    }

    /// Largest coefficient difference against `other`.
    pub fn max_difference(&self, other: &PauliOperator) -> f64 {
        let diff = self - other;
        diff.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &PauliOperator, tol: f64) -> bool {
        self.n_qubits == other.n_qubits && self.max_difference(other) <= tol
    }

    /// Terms as `(x_mask, z_mask, coefficient)` triples in canonical order.
    pub fn to_triples(&self) -> Vec<(u64, u64, Complex64)> {
        self.terms.iter().map(|(s, c)| (s.x, s.z, *c)).collect()
    }
}

impl Add for &PauliOperator {
    type Output = PauliOperator;
    fn add(self, rhs: &PauliOperator) -> PauliOperator {
        assert_eq!(self.n_qubits, rhs.n_qubits, "register mismatch");
        let mut out = self.clone();
        for (s, c) in &rhs.terms {
            out.add_term(*s, *c);
        }
        out.simplify();
        out
    }
}

impl Sub for &PauliOperator {
    type Output = PauliOperator;
    fn sub(self, rhs: &PauliOperator) -> PauliOperator {
        self + &(-rhs)
    }
}

impl Neg for &PauliOperator {
    type Output = PauliOperator;
    fn neg(self) -> PauliOperator {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }
}

impl Mul for &PauliOperator {
    type Output = PauliOperator;
    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        assert_eq!(self.n_qubits, rhs.n_qubits, "register mismatch");
        let mut out = PauliOperator::zero(self.n_qubits);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let (ph, s) = a.mul(b);
                out.add_term(s, ph.to_complex() * ca * cb);
            }
        }
        out.simplify();
        out
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "({:+.12}{:+.12}i) {}", c.re, c.im, s)?;
        }
        Ok(())
    }
}
