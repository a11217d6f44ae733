//! Fixture sidecar files.
//!
//! Each `<name>_<bond>.fcidump` is accompanied by a `.toml` with the same stem
//! recording how it was made and the generator's reference energies.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{MolecularIntegrals, Notation};
use crate::error::{io_error, GbefError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEnergies {
    pub nuclear_repulsion: f64,
    pub hf: f64,
    pub fci: Option<f64>,
    #[serde(default)]
    pub fci_spin_square: Option<f64>,
    #[serde(default)]
    pub max_fock_occ_virt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeFixture {
    pub name: String,
    /// Angstrom.
    pub bond_length: f64,
    pub basis: String,
    pub generator: String,
    /// Relative to the sidecar's directory once loaded.
    pub fcidump: PathBuf,
    pub n_spatial: usize,
    pub n_electrons: usize,
    #[serde(default)]
    pub geometry: Vec<(String, f64, f64, f64)>,
    pub energies: ReferenceEnergies,
}

impl MoleculeFixture {
    /// Reads a sidecar and resolves its FCIDUMP path.
    pub fn load(sidecar: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(sidecar).map_err(io_error(sidecar))?;
        let mut fx: MoleculeFixture = toml::from_str(&text)
            .map_err(|e| GbefError::Metadata { path: sidecar.to_path_buf(), message: e.to_string() })?;
        if fx.fcidump.is_relative() {
            let dir = sidecar.parent().unwrap_or_else(|| Path::new("."));
            fx.fcidump = dir.join(&fx.fcidump);
        }
        if !(fx.bond_length > 0.0) {
            return Err(GbefError::Metadata {
                path: sidecar.to_path_buf(),
                message: format!("bond_length must be positive, got {}", fx.bond_length),
            });
        }
        if !fx.fcidump.is_file() {
            return Err(GbefError::Metadata {
                path: sidecar.to_path_buf(),
                message: format!("FCIDUMP {} does not exist", fx.fcidump.display()),
            });
        }
        Ok(fx)
    }

    /// Sidecar for an FCIDUMP path, if one sits next to it.
    pub fn for_fcidump(fcidump: &Path) -> Result<Option<Self>> {
        let sidecar = fcidump.with_extension("toml");
        if sidecar.is_file() {
            Self::load(&sidecar).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn integrals(&self) -> Result<MolecularIntegrals> {
        let m = MolecularIntegrals::from_file(&self.fcidump, Notation::Chemists)?;
        if m.n_spatial != self.n_spatial || m.n_electrons != self.n_electrons {
            return Err(GbefError::Metadata {
                path: self.fcidump.clone(),
                message: format!(
                    "sidecar says {} orbitals / {} electrons, file has {} / {}",
                    self.n_spatial, self.n_electrons, m.n_spatial, m.n_electrons
                ),
            });
        }
        Ok(m)
    }

    /// `h4_0.9000`-style label.
    pub fn label(&self) -> String {
        format!("{}_{:.4}", self.name, self.bond_length)
    }
}

/// All fixtures in a directory, sorted by bond length.
pub fn load_fixture_dir(dir: &Path) -> Result<Vec<MoleculeFixture>> {
    let entries = std::fs::read_dir(dir).map_err(io_error(dir))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(io_error(dir))?.path();
        if path.extension().is_some_and(|e| e == "toml") {
            out.push(MoleculeFixture::load(&path)?);
        }
    }
    if out.is_empty() {
        return Err(GbefError::InvalidInput(format!("no fixture sidecars in {}", dir.display())));
    }
    out.sort_by(|a, b| a.bond_length.total_cmp(&b.bond_length));
    Ok(out)
}
