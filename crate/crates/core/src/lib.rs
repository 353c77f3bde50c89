//! Two-orbital quantum discord of fermionic states under the number-parity
//! superselection rule.
//!
//! - [`discord`]: closed-form measures on the 4x4 two-orbital reduced state.
//! - [`densities`]: one-body density, pairing tensor and two-body diagonal;
//!   reduced-state assembly, natural orbitals and Bogoliubov transformations.
//! - [`agassi`]: analytic mean-field (HFB) densities and discord maps of the
//!   Agassi two-level model.
//! - [`lmg`]: exact Lipkin-Meshkov-Glick ground state in the quasispin basis
//!   and its discord between Hartree-Fock orbitals.
//! - [`fock`]: brute-force occupation-number engine used as an oracle.

pub mod agassi;
pub mod densities;
pub mod discord;
pub mod error;
pub mod fock;
pub mod grid;
pub mod lmg;
pub mod sampling;

pub use error::{Error, Result};
