//! Molecular integrals, FCIDUMP ingestion and Hamiltonian assembly.
//!
//! Orbitals are assumed energy-ordered: the restricted Hartree-Fock
//! determinant occupies the lowest `n_electrons / 2` spatial orbitals.

mod fcidump;
mod fixture;
mod hamiltonian;

pub use fcidump::{parse_fcidump, write_fcidump, Notation};
pub use fixture::{load_fixture_dir, MoleculeFixture, ReferenceEnergies};
pub use hamiltonian::build_hamiltonian;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, io_error, GbefError, Result};

/// Integrals over real spatial orbitals; `h2` is chemists' `(pq|rs)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MolecularIntegrals {
    pub n_spatial: usize,
    pub n_electrons: usize,
    pub ms2: i64,
    pub orbsym: Vec<u32>,
    pub isym: u32,
    pub core_energy: f64,
    h1: Vec<f64>,
    h2: Vec<f64>,
}

impl MolecularIntegrals {
    pub fn zeros(n_spatial: usize, n_electrons: usize) -> Self {
        Self {
            n_spatial,
            n_electrons,
            ms2: 0,
            orbsym: vec![1; n_spatial],
            isym: 1,
            core_energy: 0.0,
            h1: vec![0.0; n_spatial * n_spatial],
            h2: vec![0.0; n_spatial.pow(4)],
        }
    }

    pub fn from_file(path: &Path, notation: Notation) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        parse_fcidump(&text, notation)
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_spatial
    }

    pub fn n_occupied(&self) -> usize {
        self.n_electrons / 2
    }

    pub fn n_virtual(&self) -> usize {
        self.n_spatial - self.n_occupied()
    }

    #[inline]
    pub fn h1(&self, p: usize, q: usize) -> f64 {
        self.h1[p * self.n_spatial + q]
    }

    #[inline]
    pub fn h2(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_spatial;
        self.h2[((p * n + q) * n + r) * n + s]
    }

    /// Sets `h_pq` and `h_qp`.
    pub fn set_h1(&mut self, p: usize, q: usize, value: f64) {
        let n = self.n_spatial;
        self.h1[p * n + q] = value;
        self.h1[q * n + p] = value;
    }

    /// Sets `(pq|rs)` and its seven permutational images.
    pub fn set_h2(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        let n = self.n_spatial;
        for [a, b, c, d] in [
            [p, q, r, s],
            [q, p, r, s],
            [p, q, s, r],
            [q, p, s, r],
            [r, s, p, q],
            [s, r, p, q],
            [r, s, q, p],
            [s, r, q, p],
        ] {
            self.h2[((a * n + b) * n + c) * n + d] = value;
        }
    }

    /// Representative index of the 8-fold symmetry class of `(pq|rs)`.
    pub fn canonical_h2_index(p: usize, q: usize, r: usize, s: usize) -> [usize; 4] {
        let (p, q) = (p.max(q), p.min(q));
        let (r, s) = (r.max(s), r.min(s));
        if (p, q) >= (r, s) {
            [p, q, r, s]
        } else {
            [r, s, p, q]
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_electrons > 2 * self.n_spatial {
            return Err(invalid(format!(
                "{} electrons do not fit {} spatial orbitals",
                self.n_electrons, self.n_spatial
            )));
        }
        if 2 * self.n_spatial > crate::operator::pauli::MAX_QUBITS {
            return Err(GbefError::Unsupported(format!("{} spatial orbitals is too many", self.n_spatial)));
        }
        if !self.core_energy.is_finite() || self.h1.iter().chain(self.h2.iter()).any(|v| !v.is_finite()) {
            return Err(GbefError::Numerical("non-finite integral".into()));
        }
        Ok(())
    }

    /// Restricted closed-shell Hartree-Fock energy of the lowest determinant.
    pub fn hartree_fock_energy(&self) -> f64 {
        let occ = self.n_occupied();
        let mut e = self.core_energy;
        for i in 0..occ {
            e += 2.0 * self.h1(i, i);
            for j in 0..occ {
                e += 2.0 * self.h2(i, i, j, j) - self.h2(i, j, j, i);
            }
        }
        e
    }

    /// Closed-shell Fock matrix element `F_pq`.
    pub fn fock(&self, p: usize, q: usize) -> f64 {
        let mut f = self.h1(p, q);
        for i in 0..self.n_occupied() {
            f += 2.0 * self.h2(p, q, i, i) - self.h2(p, i, i, q);
        }
        f
    }

    /// Largest `|F_ia|` over occupied `i` and virtual `a`; zero for converged
    /// canonical or non-canonical HF orbitals.
    pub fn max_fock_occ_virt(&self) -> f64 {
        let occ = self.n_occupied();
        let mut m = 0.0f64;
        for i in 0..occ {
            for a in occ..self.n_spatial {
                m = m.max(self.fock(i, a).abs());
            }
        }
        m
    }
}
