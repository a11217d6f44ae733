use super::MolecularIntegrals;
use crate::operator::{FermionOperator, LadderOp, Spin, SpinOrbital};

/// Second-quantized electronic Hamiltonian over spin orbitals:
/// `Σ h_pq a†_p a_q + ½ Σ (ps|qr) a†_p a†_q a_r a_s + E_core`,
/// with spin carried by the `p–s` and `q–r` index pairs.
pub fn build_hamiltonian(m: &MolecularIntegrals) -> FermionOperator {
    let n = m.n_spatial;
    let spins = [Spin::Alpha, Spin::Beta];
    let mut h = FermionOperator::identity(m.core_energy);
    for p in 0..n {
        for q in 0..n {
            let v = m.h1(p, q);
            if v == 0.0 {
                continue;
            }
            for &s in &spins {
                let a = SpinOrbital::new(p, s).qubit();
                let b = SpinOrbital::new(q, s).qubit();
                h.add_term(vec![LadderOp::create(a), LadderOp::annihilate(b)], v);
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = m.h2(p, s, q, r);
                    if v == 0.0 {
                        continue;
                    }
                    for &sigma in &spins {
                        for &tau in &spins {
                            let ip = SpinOrbital::new(p, sigma).qubit();
                            let iq = SpinOrbital::new(q, tau).qubit();
                            let ir = SpinOrbital::new(r, tau).qubit();
                            let is = SpinOrbital::new(s, sigma).qubit();
                            if ip == iq || ir == is {
                                continue;
                            }
                            h.add_term(
                                vec![
                                    LadderOp::create(ip),
                                    LadderOp::create(iq),
                                    LadderOp::annihilate(ir),
                                    LadderOp::annihilate(is),
                                ],
                                0.5 * v,
                            );
                        }
                    }
                }
            }
        }
    }
    h
}
