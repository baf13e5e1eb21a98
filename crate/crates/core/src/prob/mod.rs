//! Exact computation over dense finite-alphabet probability tables.
//!
//! Tables are row-major with the last axis varying fastest. Logarithms are
//! base 2 and `0 log 0 = 0`.

mod compose;
mod info;
mod joint;
mod kernel;
mod pmf;

pub use compose::{compose, names};
pub use info::{conditional_mutual_information, mutual_information};
pub use joint::{Axis, JointPmf};
pub use kernel::TransitionKernel;
pub use pmf::{entropy, entropy_bits, Pmf};

/// Allowed deviation of total mass (or of a kernel row) from one.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Mutual informations in `[-MI_CLAMP, 0)` are reported as exactly zero.
pub const MI_CLAMP: f64 = 1e-10;

/// Positive mutual informations below this level are floating-point noise
/// (e.g. an exact product table whose entropies round differently) and are
/// reported as exactly zero as well.
pub const MI_NOISE_FLOOR: f64 = 1e-14;

/// Hard cap on the number of entries in any dense table.
pub const MAX_TABLE_ENTRIES: usize = 10_000_000;

use crate::{Error, Result};

pub(crate) fn check_table_size(cards: impl IntoIterator<Item = usize>) -> Result<usize> {
    let mut total: u128 = 1;
    for c in cards {
        if c == 0 {
            return Err(Error::validation("axis cardinality must be at least 1"));
        }
        total = total.saturating_mul(c as u128);
    }
    if total > MAX_TABLE_ENTRIES as u128 {
        return Err(Error::CapExceeded {
            what: "dense probability table",
            requested: total,
            cap: MAX_TABLE_ENTRIES as u128,
        });
    }
    Ok(total as usize)
}

pub(crate) fn check_entries(values: &[f64], what: &str) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::validation(format!(
                "{what}: entry {i} is {v}, expected a finite non-negative probability"
            )));
        }
    }
    Ok(())
}

pub(crate) fn check_mass(values: &[f64], what: &str) -> Result<()> {
    let mass: f64 = values.iter().sum();
    if (mass - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::validation(format!(
            "{what}: total mass is {mass}, expected 1 within {MASS_TOLERANCE:e}"
        )));
    }
    Ok(())
}

/// Applies the non-negativity clamp and the noise floor to a raw
/// entropy-difference mutual information.
pub(crate) fn clamp_mi(v: f64) -> f64 {
    if (-MI_CLAMP..MI_NOISE_FLOOR).contains(&v) {
        0.0
    } else {
        v
    }
}
