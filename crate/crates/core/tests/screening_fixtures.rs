mod common;

use gbef_core::operator::{enumerate_excitations, excitation_generator, jordan_wigner};
use gbef_core::pipeline::MolecularSystem;
use gbef_core::screening::{
    project_generator_directly, project_operator, project_subspace, screen, sort_truncate, SelectionReport, Thresholds,
};
use gbef_core::statevector::{apply_excitation_exp, commutator_expectation, hartree_fock_state, CompiledExcitation};

fn excitations(s: &MolecularSystem) -> Vec<gbef_core::operator::Excitation> {
    enumerate_excitations(s.integrals.n_spatial, s.n_electrons()).unwrap()
}

fn small_systems() -> Vec<MolecularSystem> {
    let mut v = common::systems("h2");
    v.extend(common::systems("h4"));
    v
}

#[test]
fn subspace_matches_full_register() {
    for s in small_systems() {
        let hf = hartree_fock_state(s.n_qubits(), s.n_electrons()).unwrap();
        let e0 = s.hf_energy();
        for e in excitations(&s) {
            let p = project_subspace(&s.hamiltonian, s.reference(), &e).unwrap();
            let a = CompiledExcitation::new(&e, s.n_qubits()).unwrap();
            let full = commutator_expectation(&hf, &s.sparse, &a).unwrap();
            assert!((p.gradient() - full).abs() < 1e-12, "{e}: {} vs {full}", p.gradient());
            assert!((p.energy(0.0) - e0).abs() < 1e-10);
            for theta in [-0.5, -0.1, 0.1, 0.5] {
                let psi = apply_excitation_exp(&hf, &[(e, 1.0)], theta).unwrap();
                let full_e = s.sparse.expectation(&psi).unwrap();
                assert!((p.energy(theta) - full_e).abs() < 1e-10, "{e} at {theta}");
            }
        }
    }
}

#[test]
fn both_projection_routes_agree() {
    for s in small_systems().into_iter().step_by(4) {
        for e in excitations(&s) {
            let p = project_subspace(&s.hamiltonian, s.reference(), &e).unwrap();
            let direct = project_generator_directly(&e, s.n_qubits(), s.reference()).unwrap();
            assert!((&p.a_sub - &direct).camax() < 1e-14, "{e}");
            assert!(p.is_consistent(1e-12));
            let full_a = jordan_wigner(&excitation_generator(&e), s.n_qubits()).unwrap();
            let projected = project_operator(&full_a, &e.qubits(), s.reference());
            assert!((&projected - &direct).camax() < 1e-14);
        }
    }
}

#[test]
fn singles_vanish_at_hartree_fock() {
    for s in common::all_systems() {
        for e in excitations(&s).into_iter().filter(|e| e.is_single()) {
            let g = project_subspace(&s.hamiltonian, s.reference(), &e).unwrap().gradient();
            assert!(g.abs() < 1e-10, "{} {e}: {g:e}", s.name);
        }
    }
}

#[test]
fn gradients_match_finite_differences() {
    let d = 1e-5;
    for s in common::all_systems() {
        for e in excitations(&s) {
            let p = project_subspace(&s.hamiltonian, s.reference(), &e).unwrap();
            let fd = (p.energy(d) - p.energy(-d)) / (2.0 * d);
            let g = p.gradient();
            assert!((fd - g).abs() <= 1e-6 * g.abs().max(1e-3), "{} {e}: fd {fd:e} vs {g:e}", s.name);
        }
    }
}

#[test]
fn hydrogen_pair_subspace_reaches_the_exact_energy() {
    for s in common::systems("h2") {
        let double = excitations(&s).into_iter().find(|e| !e.is_single()).unwrap();
        let p = project_subspace(&s.hamiltonian, s.reference(), &double).unwrap();
        // golden-section search over one period
        let (mut a, mut b) = (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);
        let r = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - r * (b - a);
            let dd = a + r * (b - a);
            if p.energy(c) < p.energy(dd) {
                b = dd;
            } else {
                a = c;
            }
        }
        let best = p.energy(0.5 * (a + b));
        let fci = s.fci().unwrap().energy;
        assert!((best - fci).abs() < 1e-10, "bond {:?}: {best} vs {fci}", s.bond_length);
    }
}

#[test]
fn hydrogen_pair_keeps_one_group() {
    let s = common::system_near("h2", 0.7414);
    let r = s.screen(Thresholds::new(0.05, 0.5).unwrap()).unwrap();
    assert_eq!(r.kept.len(), 1);
    assert!(s.groups[r.kept[0]].is_double());
}

#[test]
fn h4_report_lists_every_group() {
    let s = common::system_near("h4", 0.9);
    let r = s.screen(Thresholds::new(0.05, 0.5).unwrap()).unwrap();
    assert_eq!(r.records.len(), 14);
    assert_eq!(r.kept.len() + r.dropped.len(), 14);
    let json = r.to_json().unwrap();
    assert_eq!(SelectionReport::from_json(&json).unwrap(), r);
}

#[test]
fn screening_is_deterministic_and_prefix_closed() {
    let s = common::system_near("h4", 0.6);
    let a = screen(&s.hamiltonian, s.reference(), &s.groups).unwrap();
    let b = screen(&s.hamiltonian, s.reference(), &s.groups).unwrap();
    assert_eq!(a, b);
    let loose = sort_truncate(a.clone(), Thresholds::new(0.0, f64::INFINITY).unwrap()).unwrap();
    for abs in [1e-4, 1e-2, 0.05, 0.1] {
        for mag in [0.3, 0.5, 1.0, f64::INFINITY] {
            let r = sort_truncate(a.clone(), Thresholds::new(abs, mag).unwrap()).unwrap();
            assert_eq!(r.kept[..], loose.kept[..r.kept.len()], "abs={abs} mag={mag}");
        }
    }
    let none = sort_truncate(a, Thresholds::new(f64::INFINITY, 0.5).unwrap()).unwrap();
    assert!(none.is_empty_selection() && none.warning.is_some());
}
