//! Desk-scale random-binning simulator: builds the bin/subbin codebook,
//! encodes by joint typicality against the main-channel state, decodes at
//! the legitimate receiver and measures the eavesdropper's equivocation with
//! exact Bayesian posteriors.

mod codebook;
mod coding;
mod config;
mod experiment;
pub mod oracle;
mod posterior;

pub use codebook::{build_codebook, Codebook};
pub use coding::{decode, encode, select_codeword, Decoded, Encoded};
pub use config::{SimConfig, MAX_BLOCK_LENGTH, MAX_CODEBOOK, MAX_ENCODER_TABLE, MAX_STATE_PAIRS};
pub use experiment::{run_experiment, EquivocationStats, SimulationReport};
pub use posterior::{eavesdropper_posterior, PosteriorEngine};
