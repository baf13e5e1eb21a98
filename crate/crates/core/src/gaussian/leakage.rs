use serde::Serialize;

use super::{joint_covariance, oracle_mi, GaussianWiretapParams, Var};
use crate::numeric::bisect;
use crate::{Error, Result};

/// Largest `|alpha|` explored when bracketing leakage roots.
pub const ROOT_BRACKET_CAP: f64 = 1e3;

/// The three mutual informations of the auxiliary `U = X + alpha V1`, in
/// bits, from the covariance oracle. `f64::INFINITY` marks a singular
/// joint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MiTriple {
    pub uy: f64,
    pub uv12: f64,
    pub uz: f64,
}

pub fn mi_triple(params: &GaussianWiretapParams, alpha: f64) -> Result<MiTriple> {
    use Var::*;
    let c = joint_covariance(params, alpha)?;
    Ok(MiTriple {
        uy: oracle_mi(&c, &[U], &[Y])?,
        uv12: oracle_mi(&c, &[U], &[V1, V2])?,
        uz: oracle_mi(&c, &[U], &[Z])?,
    })
}

/// Leakage function `I(U;Z) - I(U;V1,V2)`.
pub fn leakage(params: &GaussianWiretapParams, alpha: f64) -> Result<f64> {
    let m = mi_triple(params, alpha)?;
    Ok(m.uz - m.uv12)
}

/// `R(alpha) = I(U;Y) - I(U;V1,V2)`.
pub fn r_alpha(params: &GaussianWiretapParams, alpha: f64) -> Result<f64> {
    let m = mi_triple(params, alpha)?;
    Ok(m.uy - m.uv12)
}

/// `R_Z(alpha) = I(U;Y) - I(U;Z)`.
pub fn rz_alpha(params: &GaussianWiretapParams, alpha: f64) -> Result<f64> {
    let m = mi_triple(params, alpha)?;
    Ok(m.uy - m.uz)
}

/// Maximiser of the leakage function.
///
/// The leakage equals `1/2 log2(Var(Z) Var(X|V1,V2) / f(alpha))` with
/// `f(alpha) = Var(U) Var(Z) - Cov(U,Z)^2`, a quadratic in `alpha`, so the
/// maximiser is the stationary point of `f`. `printed` holds the printed
/// closed form (or the reason it could not be evaluated) and
/// `printed_shortfall` how much leakage it loses against `value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaStar {
    pub value: f64,
    pub max_leakage: f64,
    pub printed: Option<f64>,
    pub printed_error: Option<String>,
    pub printed_shortfall: Option<f64>,
}

pub fn alpha_star(params: &GaussianWiretapParams) -> Result<AlphaStar> {
    use Var::*;
    let c0 = joint_covariance(params, 0.0)?;
    let (u, v1, z) = (U as usize, V1 as usize, Z as usize);
    let a = c0[(u, v1)]; // Cov(X, V1)
    let b = c0[(u, z)]; // Cov(X, Z)
    let c = c0[(v1, z)]; // Cov(V1, Z)
    let q1 = c0[(v1, v1)];
    let vz = c0[(z, z)];
    let den = vz * q1 - c * c;
    if den <= 1e-12 * (vz * q1).max(1.0) {
        return Err(Error::degenerate("Var(Z) Q1 - Cov(V1,Z)^2", den));
    }
    let value = (c * b - vz * a) / den;
    let max_leakage = leakage(params, value)?;
    if !max_leakage.is_finite() {
        return Err(Error::degenerate("Var(X | V1, V2)", 0.0));
    }
    let (printed, printed_error, printed_shortfall) = match super::closed_form::alpha_star(params) {
        Ok(p) => {
            let gap = leakage(params, p).map(|l| max_leakage - l).ok();
            (Some(p), None, gap)
        }
        Err(e) => (None, Some(e.to_string()), None),
    };
    Ok(AlphaStar {
        value,
        max_leakage,
        printed,
        printed_error,
        printed_shortfall,
    })
}

/// Zero crossings of the leakage function on either side of its maximiser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeakageRoots {
    pub neg: Option<f64>,
    pub pos: Option<f64>,
}

/// Finds the crossing on each side of the maximiser by expanding geometric
/// brackets (capped at `|alpha| <= 1e3`) and bisecting to `1e-12` in alpha.
///
/// Both roots are absent when the leakage does not depend on alpha
/// (`Q1 = 0`) or never becomes positive.
pub fn leakage_roots(params: &GaussianWiretapParams) -> Result<LeakageRoots> {
    let star = match alpha_star(params) {
        Ok(s) => s,
        Err(Error::DegenerateGeometry { .. }) => {
            return Ok(LeakageRoots {
                neg: None,
                pos: None,
            })
        }
        Err(e) => return Err(e),
    };
    if star.max_leakage <= 0.0 {
        return Ok(LeakageRoots {
            neg: None,
            pos: None,
        });
    }
    let f = |a: f64| leakage(params, a).unwrap_or(f64::NAN);
    let side = |dir: f64| -> Option<f64> {
        let mut inner = star.value;
        let mut off = 0.25;
        loop {
            let outer = (star.value + dir * off).clamp(-ROOT_BRACKET_CAP, ROOT_BRACKET_CAP);
            if f(outer) < 0.0 {
                let (lo, hi) = if dir < 0.0 {
                    (outer, inner)
                } else {
                    (inner, outer)
                };
                return bisect(f, lo, hi, 1e-12, 0.0);
            }
            if outer.abs() >= ROOT_BRACKET_CAP {
                return None;
            }
            inner = outer;
            off *= 2.0;
        }
    };
    Ok(LeakageRoots {
        neg: side(-1.0),
        pos: side(1.0),
    })
}

/// Leakage sampled on a grid together with its maximiser and roots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageProfile {
    pub alpha_grid: Vec<f64>,
    pub delta_i: Vec<f64>,
    pub alpha_star: Option<f64>,
    pub alpha_root_neg: Option<f64>,
    pub alpha_root_pos: Option<f64>,
}

pub fn leakage_profile(params: &GaussianWiretapParams, grid: &[f64]) -> Result<LeakageProfile> {
    let delta_i = grid
        .iter()
        .map(|&a| leakage(params, a))
        .collect::<Result<Vec<_>>>()?;
    let star = match alpha_star(params) {
        Ok(s) => Some(s.value),
        Err(Error::DegenerateGeometry { .. }) => None,
        Err(e) => return Err(e),
    };
    let roots = leakage_roots(params)?;
    Ok(LeakageProfile {
        alpha_grid: grid.to_vec(),
        delta_i,
        alpha_star: star,
        alpha_root_neg: roots.neg,
        alpha_root_pos: roots.pos,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stateless_leakage_is_wiretap_capacity() {
        let g = GaussianWiretapParams::uncorrelated(2.0, 0.0, 0.0, 1.0, 3.0).unwrap();
        for a in [-3.0, 0.0, 0.4, 7.0] {
            assert_abs_diff_eq!(
                leakage(&g, a).unwrap(),
                0.5 * (1.0 + 2.0 / 3.0f64).log2(),
                epsilon = 1e-12
            );
        }
        assert!(matches!(
            alpha_star(&g),
            Err(Error::DegenerateGeometry { .. })
        ));
        assert_eq!(
            leakage_roots(&g).unwrap(),
            LeakageRoots {
                neg: None,
                pos: None
            }
        );
    }

    #[test]
    fn unit_parameters() {
        let g = GaussianWiretapParams::uncorrelated(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            leakage(&g, 0.0).unwrap(),
            0.5 * 1.5f64.log2(),
            epsilon = 1e-12
        );
        let m = mi_triple(&g, 0.0).unwrap();
        assert_abs_diff_eq!(m.uy, 0.5 * 1.5f64.log2(), epsilon = 1e-12);
        assert_eq!(m.uv12, 0.0);
        let s = alpha_star(&g).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.printed, Some(0.0));
        let r = leakage_roots(&g).unwrap();
        let (n, p) = (r.neg.unwrap(), r.pos.unwrap());
        assert!(n < 0.0 && p > 0.0);
        assert!(leakage(&g, n).unwrap().abs() < 1e-8);
        assert!(leakage(&g, p).unwrap().abs() < 1e-8);
    }

    #[test]
    fn treat_state_as_noise_rate() {
        let g = GaussianWiretapParams::uncorrelated(2.0, 1.5, 1.0, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(
            r_alpha(&g, 0.0).unwrap(),
            0.5 * ((2.0 + 1.5 + 0.5) / (1.5 + 0.5f64)).log2(),
            epsilon = 1e-12
        );
    }
}
