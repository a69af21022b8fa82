pub mod analysis;
pub mod aux;
pub mod bksf;
pub mod encoding;
pub mod error;
pub mod group;
pub mod lattice;
pub mod lowering;
pub mod majorana;
pub mod mlsc;
pub mod pauli;
pub mod state_prep;

pub use error::{Error, Result, Violation};
pub use group::{group_contains, Membership, StabilizerGroup};
pub use pauli::{commutes, multiply, Pauli, PauliString, Phase};
