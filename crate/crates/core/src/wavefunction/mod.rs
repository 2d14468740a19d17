//! Position wavefunctions, full spin⊗position states and their spin-traced densities.
//!
//! Orbitals form an orthonormal alphabet, so every integral over a traced
//! coordinate reduces to a Kronecker delta between orbital labels.

mod position;
mod reduced;
mod state;

use thiserror::Error;

use crate::spin::HalfInt;

pub use position::{
    permute_arguments, position_inner_product, project_out_symmetric_sum, OrbitalLabel,
    PositionWavefunction, TERM_EPS,
};
pub use reduced::{
    evaluate_density, marginalize, CompiledDensity, OrbitalEvaluator, Point2, ReducedDensity,
};
pub use state::{
    assemble_state, family_relabellings, ground_assignment, inner_product, max_state_diff,
    position_family, position_template, raw_position_family, spin_family, spin_trace,
    spin_traced_kernel, Coupling, SpinPositionState, SpinTrace, VANISHING_NORM_SQR,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WavefunctionError {
    #[error("particle count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("family is not closed under the cyclic relabelling (residual {0:e})")]
    NotCyclicFamily(f64),
    #[error("particle count {0} unsupported (3 or 4)")]
    UnsupportedCount(usize),
    #[error("projection {0} not available for this particle count")]
    InvalidProjection(HalfInt),
    #[error("statistics differ between the two branches")]
    StatisticsMismatch,
    #[error("the orbital assignment makes every position part vanish")]
    VanishingRepresentation,
    #[error("kernels live on different coordinates")]
    CoordinateMismatch,
    #[error("keep set is empty")]
    EmptyKeep,
    #[error("keep set names a coordinate the kernel does not carry")]
    UnknownCoordinate,
    #[error("no numeric function for orbital {0}")]
    UnresolvedLabel(OrbitalLabel),
    #[error("symmetrizer failed: {0}")]
    Symmetrizer(String),
}

#[cfg(test)]
mod tests;
