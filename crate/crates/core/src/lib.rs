//! Few-body matter-wave interference toolkit.
//!
//! Two-particle Hong-Ou-Mandel transformations in second quantization,
//! minimal-spin three- and four-particle states built from Young symmetrizers
//! and coupled spin bases, and spin-traced densities over MO-LCAO orbitals.

pub mod cli;
pub mod density;
pub mod exact;
pub mod fock;
pub mod orbitals;
pub mod spin;
pub mod symmetric;
pub mod wavefunction;
