use gbef_core::operator::{
    enumerate_excitations, excitation_generator, group_spin_adapted, jordan_wigner, FermionOperator, LadderOp,
    PauliOperator, SpinOrbital,
};
use num_complex::Complex64;
use proptest::prelude::*;

const MODES: usize = 6;

fn ladder() -> impl Strategy<Value = LadderOp> {
    (0..MODES, any::<bool>()).prop_map(|(mode, dagger)| LadderOp { mode, dagger })
}

fn fermion_operator() -> impl Strategy<Value = FermionOperator> {
    prop::collection::vec((prop::collection::vec(ladder(), 0..4), -2.0..2.0f64), 1..4).prop_map(|terms| {
        let mut op = FermionOperator::zero();
        for (t, c) in terms {
            op.add_term(t, c);
        }
        op
    })
}

proptest! {
    #[test]
    fn jordan_wigner_is_multiplicative(f in fermion_operator(), g in fermion_operator()) {
        let fg = jordan_wigner(&(&f * &g), MODES).unwrap();
        let prod = &jordan_wigner(&f, MODES).unwrap() * &jordan_wigner(&g, MODES).unwrap();
        prop_assert!(fg.approx_eq(&prod, 1e-12), "{} vs {}", fg, prod);
    }

    #[test]
    fn jordan_wigner_is_additive(f in fermion_operator(), g in fermion_operator()) {
        let sum = jordan_wigner(&(&f + &g), MODES).unwrap();
        let parts = &jordan_wigner(&f, MODES).unwrap() + &jordan_wigner(&g, MODES).unwrap();
        prop_assert!(sum.approx_eq(&parts, 1e-12));
    }

    #[test]
    fn dagger_commutes_with_encoding(f in fermion_operator()) {
        let a = jordan_wigner(&f.dagger(), MODES).unwrap();
        let b = jordan_wigner(&f, MODES).unwrap().dagger();
        prop_assert!(a.approx_eq(&b, 1e-12));
    }
}

#[test]
fn encoded_anticommutation() {
    for i in 0..MODES {
        for j in 0..MODES {
            let a = jordan_wigner(&FermionOperator::from_indices(&[], &[i], 1.0), MODES).unwrap();
            let ad = jordan_wigner(&FermionOperator::from_indices(&[j], &[], 1.0), MODES).unwrap();
            let expected = if i == j { PauliOperator::identity(MODES, 1.0) } else { PauliOperator::zero(MODES) };
            assert!(a.anticommutator(&ad).approx_eq(&expected, 1e-14), "{{a_{i}, a†_{j}}}");
            let aj = jordan_wigner(&FermionOperator::from_indices(&[], &[j], 1.0), MODES).unwrap();
            assert!(a.anticommutator(&aj).approx_eq(&PauliOperator::zero(MODES), 1e-14));
        }
    }
}

#[test]
fn generator_images_are_anti_hermitian() {
    for e in enumerate_excitations(4, 4).unwrap() {
        let img = jordan_wigner(&excitation_generator(&e), 8).unwrap();
        assert!(img.is_anti_hermitian(1e-14), "{e}");
        assert!(img.iter().all(|(_, c)| c.re == 0.0), "{e}");
        let neg = img.dagger().scale(Complex64::new(-1.0, 0.0));
        assert!(img.approx_eq(&neg, 0.0));
    }
}

fn spin_raising(n_spatial: usize) -> FermionOperator {
    let mut op = FermionOperator::zero();
    for p in 0..n_spatial {
        let up = SpinOrbital::alpha(p).qubit();
        let down = SpinOrbital::beta(p).qubit();
        op = &op + &FermionOperator::from_indices(&[up], &[down], 1.0);
    }
    op
}

fn spin_z(n_spatial: usize) -> FermionOperator {
    let mut op = FermionOperator::zero();
    for p in 0..n_spatial {
        let up = SpinOrbital::alpha(p).qubit();
        let down = SpinOrbital::beta(p).qubit();
        op = &op + &FermionOperator::from_indices(&[up], &[up], 0.5);
        op = &op + &FermionOperator::from_indices(&[down], &[down], -0.5);
    }
    op
}

// A closed-shell spin-adapted generator is a spin scalar: it commutes with
// S+, S- and Sz, so it never leaves the singlet sector of the reference.
#[test]
fn groups_are_spin_scalars() {
    for (n_spatial, n_electrons) in [(2, 2), (4, 4), (5, 4), (4, 6)] {
        let groups = group_spin_adapted(&enumerate_excitations(n_spatial, n_electrons).unwrap()).unwrap();
        let s_plus = spin_raising(n_spatial);
        let s_minus = s_plus.dagger();
        let s_z = spin_z(n_spatial);
        for g in &groups {
            let gen = g.generator();
            for s in [&s_plus, &s_minus, &s_z] {
                let comm = &(&gen * s) - &(s * &gen);
                assert!(comm.max_abs_coefficient() < 1e-12, "group {} ({}) breaks spin symmetry", g.id, g.label);
            }
        }
    }
}

#[test]
fn grouping_covers_every_excitation() {
    for (n_spatial, n_electrons) in [(2, 2), (4, 4), (7, 10), (6, 4)] {
        let ex = enumerate_excitations(n_spatial, n_electrons).unwrap();
        let groups = group_spin_adapted(&ex).unwrap();
        for e in &ex {
            assert!(groups.iter().any(|g| g.weight_of(e).is_some()), "{e} not covered");
        }
        for g in &groups {
            assert!(g.members.iter().all(|m| m.weight != 0.0));
            let gen = g.generator();
            assert!((&gen + &gen.dagger()).is_empty());
        }
    }
}
