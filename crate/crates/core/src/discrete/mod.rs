//! Finite-alphabet wiretap channels with separated states: rate triplets for
//! a given auxiliary policy, policy search, the achievable region and the
//! secrecy-rate bounds derived from it.

mod model;
mod policy;
mod rates;
mod region;
mod search;

pub use model::{Cards, DiscreteWiretapModel};
pub use policy::AuxiliaryPolicy;
pub use rates::{mi_profile, rate_triplet, MiProfile, RateTriplet};
pub use region::{RegionPoint, RegionPointSet};
pub use search::{
    achievable_points, main_channel_capacity, search, secrecy_rate, secrecy_upper_bound,
    PolicyEvaluation, PolicyMode, SearchConfig, SearchOutcome,
};
