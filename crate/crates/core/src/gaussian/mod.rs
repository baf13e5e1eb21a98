//! Gaussian wiretap channel with separated states under the dirty-paper
//! auxiliary `U = X + alpha V1`.
//!
//! Every region-level quantity is computed from the covariance-determinant
//! oracle ([`oracle_mi`] on [`joint_covariance`]). The printed closed forms
//! live in [`closed_form`] and are only used for agreement checks; see
//! [`validate`] for the sweep that compares the two.

pub mod closed_form;
mod covariance;
mod leakage;
mod params;
mod region;
pub mod validate;

pub use covariance::{joint_covariance, oracle_mi, Var};
pub use leakage::{
    alpha_star, leakage, leakage_profile, leakage_roots, mi_triple, r_alpha, rz_alpha, AlphaStar,
    LeakageProfile, LeakageRoots, MiTriple,
};
pub use params::GaussianWiretapParams;
pub use region::{
    admissible_power, case1_region, case1_thresholds, case2_region, case2_thresholds,
    case_region_in_regime, BoundaryPoint, CaseId, CaseRegion, Regime,
};
