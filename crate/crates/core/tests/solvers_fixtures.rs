mod common;

use gbef_core::screening::{build_ansatz, Thresholds};
use gbef_core::solvers::{adapt_vqe, correlation_decomposition, vqe, AdaptConfig, BfgsConfig};
use gbef_core::CHEMICAL_ACCURACY;

#[test]
fn fci_matches_reference_energies() {
    for m in ["h2", "h4", "h2o"] {
        for f in common::fixtures(m) {
            let s = gbef_core::pipeline::MolecularSystem::from_fixture(&f).unwrap();
            let r = s.fci().unwrap();
            let reference = f.energies.fci.expect("fixture without FCI energy");
            assert!((r.energy - reference).abs() < 1e-8, "{}: {} vs {reference}", f.label(), r.energy);
            assert!(r.residual < 1e-9);
        }
    }
}

#[test]
fn h4_sector_dimension() {
    let s = common::system_near("h4", 0.9);
    assert_eq!(s.fci().unwrap().dimension, 36);
}

#[test]
fn decomposition_recovers_correlation_energy() {
    let mut systems = common::systems("h2");
    systems.extend(common::systems("h4"));
    for s in systems {
        let fci = s.fci().unwrap();
        let d = correlation_decomposition(fci, &s.sparse, s.n_electrons()).unwrap();
        let corr = fci.energy - s.hf_energy();
        assert!((d.sum - corr).abs() < 1e-10, "{} {:?}: {} vs {corr}", s.name, s.bond_length, d.sum);
        assert!(d.singles_sum.abs() < 1e-10);
        assert!(d.warning.is_none());
    }
}

#[test]
fn uccsd_on_h2_is_exact() {
    for s in common::systems("h2") {
        let r = vqe(&s.uccsd_circuit(), &s.sparse, None, &BfgsConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.energy - s.fci().unwrap().energy).abs() < 1e-8, "{:?}", s.bond_length);
    }
}

#[test]
fn vqe_is_deterministic() {
    let s = common::system_near("h4", 0.7);
    let a = vqe(&s.uccsd_circuit(), &s.sparse, None, &BfgsConfig::default()).unwrap();
    let b = vqe(&s.uccsd_circuit(), &s.sparse, None, &BfgsConfig::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn adapt_log_is_monotone() {
    for bond in [0.3, 0.9] {
        let s = common::system_near("h4", bond);
        let r = adapt_vqe(&s.sparse, s.n_electrons(), &s.groups, &AdaptConfig::with_exponent(2)).unwrap();
        assert!(r.converged);
        assert!(r.final_gradient_norm < 1e-2);
        let mut prev = s.hf_energy();
        for it in &r.iterations {
            assert!(it.energy <= prev + 1e-12);
            prev = it.energy;
        }
        assert!((r.energy - s.fci().unwrap().energy).abs() < CHEMICAL_ACCURACY);
    }
}

#[test]
fn gbef_energies_are_variational_everywhere() {
    for s in common::all_systems() {
        let report = s.screen(Thresholds::new(0.05, 0.5).unwrap()).unwrap();
        let circuit = build_ansatz(&report, &s.groups, s.n_qubits(), s.n_electrons()).unwrap();
        let r = vqe(&circuit, &s.sparse, None, &BfgsConfig::default()).unwrap();
        let fci = s.fci().unwrap().energy;
        assert!(r.energy >= fci - 1e-10, "{} {:?}", s.name, s.bond_length);
        assert!(r.energy <= s.hf_energy() + 1e-12);
    }
}
