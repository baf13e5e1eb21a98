//! Achievable rate-equivocation regions for wiretap channels whose main and
//! wiretap links see separate, correlated channel states.
//!
//! The crate is split by what each part computes:
//!
//! * [`prob`]: exact finite-alphabet probability tables and information
//!   measures (entropy, mutual information, composition of kernels).
//! * [`discrete`]: rate triplets for an auxiliary policy, policy search and
//!   the resulting achievable region, secrecy-rate bounds.
//! * [`gaussian`]: closed-form and covariance-determinant mutual informations
//!   for the dirty-paper auxiliary `U = X + alpha V1`, the leakage function and
//!   the two special-case region boundaries.
//! * [`sim`]: a desk-scale random-binning simulator that measures error
//!   probability and equivocation empirically.
//!
//! All rates are in bits.

pub mod discrete;
pub mod error;
pub mod gaussian;
pub(crate) mod numeric;
pub mod prob;
pub mod sim;

pub use error::{Error, Result};
