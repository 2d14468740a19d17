//! Experiment configuration, runners and file output behind the `matterwave` binary.

mod config;
mod hom;
mod maps;
mod output;
mod report;
mod verify;

use thiserror::Error;

pub use config::{Conditioning, ConfigError, ExperimentConfig, GeometryKind};
pub use hom::{hom_cases, input_state, run_hom, HomCase, HOM_TOLERANCE};
pub use maps::{
    build_mos, minimum_at_site, output_dir, run_density, site_maximum_offsets, OUTPUT_DIR_ENV,
    SITE_MAXIMUM_RADIUS,
};
pub use output::{write_flux_csv, write_grid_csv, write_pgm, write_ppm};
pub use report::{Assertion, RunReport};
pub use verify::{balance_residual, distinct_orbitals, projections, run_verify};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown input state `{0}`")]
    UnknownState(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Fock(#[from] crate::fock::FockError),
    #[error(transparent)]
    Orbital(#[from] crate::orbitals::OrbitalError),
    #[error(transparent)]
    Density(#[from] crate::density::DensityError),
    #[error(transparent)]
    Wavefunction(#[from] crate::wavefunction::WavefunctionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
