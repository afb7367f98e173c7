//! Coherent-scattering cavity optomechanics of a levitated nano-ellipsoid's
//! torsional mode: parameters from first principles, stability, and single-
//! and two-mode output squeezing spectra, with independent numerical oracles.

pub mod cli;
pub mod config;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod model;
pub mod oracle;
pub mod spectra;
pub mod table;
pub mod verify;

pub use config::Config;
pub use dynamics::{drift_matrix, stability, transfer_matrix, StabilityReport, SteadyState};
pub use error::{Error, Result};
pub use grid::FrequencyGrid;
pub use model::{build_system, derive, Channel, Derivation, Setup, SystemModel};
pub use spectra::{Pairing, RawSpectra, SpectrumResult, TransferCoefficients, TwoModeSpectrum};
