//! Operator algebra: fermionic and Pauli operators, Jordan-Wigner encoding,
//! excitations and spin-adapted parameter groups.

pub mod excitation;
pub mod fermion;
pub mod grouping;
pub mod jordan_wigner;
pub mod pauli;

pub use excitation::{
    apply_ladder_sequence, enumerate_excitations, excitation_generator, Excitation, Spin, SpinOrbital,
};
pub use fermion::{FermionOperator, FermionTerm, LadderOp};
pub use grouping::{group_spin_adapted, spin_adapted_group_count, GroupLabel, GroupMember, ParameterGroup};
pub use jordan_wigner::jordan_wigner;
pub use pauli::{Pauli, PauliOperator, PauliString, Phase};
