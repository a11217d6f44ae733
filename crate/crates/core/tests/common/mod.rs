#![allow(dead_code)]

use std::path::PathBuf;

use gbef_core::integrals::{load_fixture_dir, MoleculeFixture};
use gbef_core::pipeline::MolecularSystem;

pub fn fixtures_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixtures(molecule: &str) -> Vec<MoleculeFixture> {
    load_fixture_dir(&fixtures_root().join(molecule)).unwrap()
}

pub fn systems(molecule: &str) -> Vec<MolecularSystem> {
    fixtures(molecule).iter().map(|f| MolecularSystem::from_fixture(f).unwrap()).collect()
}

pub fn all_systems() -> Vec<MolecularSystem> {
    ["h2", "h4", "h2o"].iter().flat_map(|m| systems(m)).collect()
}

/// Equilibrium-like geometry nearest to `bond`.
pub fn system_near(molecule: &str, bond: f64) -> MolecularSystem {
    let fx = fixtures(molecule);
    let f = fx.iter().min_by(|a, b| (a.bond_length - bond).abs().total_cmp(&(b.bond_length - bond).abs())).unwrap();
    MolecularSystem::from_fixture(f).unwrap()
}
