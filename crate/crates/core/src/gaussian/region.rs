use serde::{Deserialize, Serialize};

use super::{leakage_roots, r_alpha, rz_alpha, GaussianWiretapParams};
use crate::numeric::{bisect, linspace};
use crate::{Error, Result};

/// Tolerance on `R` when solving `R(alpha) = R` for alpha.
const RATE_SOLVE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    /// Identical states, degraded wiretapper.
    #[serde(rename = "case1")]
    CaseI,
    /// Independent states.
    #[serde(rename = "case2")]
    CaseII,
}

/// Branch of the piecewise bound on `R d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `P <= Pa`: `R d <= C_M`.
    Low,
    /// `Pa < P <= Pb`: `R(alpha0)` up to `R(alpha0)`, then `R_Z(alpha)`.
    Mid,
    /// `P > Pb`: `R_Z(1)` up to `R(1)`, then `R_Z(alpha)`.
    High,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Low => "low",
            Regime::Mid => "mid",
            Regime::High => "high",
        }
    }
}

/// One boundary sample. `alpha` is the auxiliary coefficient that produced
/// the cap when the cap comes from an `R_Z(alpha)` branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub r: f64,
    pub rd_cap: f64,
    pub alpha: Option<f64>,
}

impl BoundaryPoint {
    /// Cap on `R d` once `d <= 1` is also taken into account.
    pub fn effective_cap(&self) -> f64 {
        self.rd_cap.min(self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRegion {
    pub case_id: CaseId,
    pub p: f64,
    /// `(P1, P2)` for Case I, `(P3, P4)` for Case II.
    pub thresholds: (f64, f64),
    pub regime: Regime,
    pub c_m: f64,
    /// `P / (P + N1)`, where `R(alpha)` attains `C_M`.
    pub alpha_costa: f64,
    /// Rate at which the boundary switches to the `R_Z(alpha)` branch
    /// (`C_M` in the low regime).
    pub knee_rate: f64,
    pub boundary: Vec<BoundaryPoint>,
}

fn check_positive(vals: &[(&str, f64)]) -> Result<()> {
    for (n, v) in vals {
        if !(v.is_finite() && *v > 0.0) {
            return Err(Error::usage(format!("{n} must be positive, got {v}")));
        }
    }
    Ok(())
}

/// `(P1, P2)` for Case I.
pub fn case1_thresholds(q: f64, n1: f64, n2: f64) -> Result<(f64, f64)> {
    check_positive(&[("Q", q), ("N1", n1), ("N2", n2)])?;
    let p1 = -n1 - q / 2.0 + (q * q + 4.0 * q * n2).sqrt() / 2.0;
    let p2 = -q / 2.0 + (q * q + 4.0 * q * (n1 + n2)).sqrt() / 2.0;
    Ok((p1, p2))
}

/// `(P3, P4)` for Case II.
pub fn case2_thresholds(q: f64, n1: f64, n2: f64) -> Result<(f64, f64)> {
    check_positive(&[("Q", q), ("N1", n1), ("N2", n2)])?;
    let disc = 5.0 * q * q + 4.0 * q * (n2 - n1);
    if disc < 0.0 {
        return Err(Error::degenerate("5 Q^2 + 4 Q (N2 - N1)", disc));
    }
    let p3 = ((q - 2.0 * n1) + disc.sqrt()) / 2.0;
    let p4 = q / 2.0 + (5.0 * q * q + 4.0 * q * n2).sqrt() / 2.0;
    Ok((p3, p4))
}

fn classify(p: f64, (pa, pb): (f64, f64)) -> Regime {
    if p <= pa {
        Regime::Low
    } else if p <= pb {
        Regime::Mid
    } else {
        Regime::High
    }
}

/// Boundary of a special case evaluated with the branch formulas of a given
/// regime, regardless of where `P` falls relative to the thresholds.
pub fn case_region_in_regime(
    case_id: CaseId,
    p: f64,
    q: f64,
    n1: f64,
    n2: f64,
    grid_size: usize,
    regime: Regime,
) -> Result<CaseRegion> {
    check_positive(&[("P", p), ("Q", q), ("N1", n1), ("N2", n2)])?;
    if grid_size < 2 {
        return Err(Error::usage("grid size must be at least 2"));
    }
    let (params, thresholds) = match case_id {
        CaseId::CaseI => (
            GaussianWiretapParams::case_one(p, q, n1, n2)?,
            case1_thresholds(q, n1, n2)?,
        ),
        CaseId::CaseII => (
            GaussianWiretapParams::case_two(p, q, n1, n2)?,
            case2_thresholds(q, n1, n2)?,
        ),
    };
    let alpha_c = p / (p + n1);
    let c_m = r_alpha(&params, alpha_c)?;

    // (knee rate, cap below the knee, end of the alpha segment)
    let (knee, flat_cap, alpha_end) = match regime {
        Regime::Low => (c_m, c_m, alpha_c),
        Regime::Mid => {
            let a0 = leakage_roots(&params)?
                .pos
                .ok_or_else(|| Error::degenerate("positive leakage root", f64::NAN))?;
            let k = r_alpha(&params, a0)?;
            (k, k, a0)
        }
        Regime::High => (r_alpha(&params, 1.0)?, rz_alpha(&params, 1.0)?, 1.0),
    };
    let (lo, hi) = if alpha_end >= alpha_c {
        (alpha_c, alpha_end)
    } else {
        (alpha_end, alpha_c)
    };

    let mut boundary = Vec::with_capacity(grid_size);
    for r in linspace(0.0, c_m, grid_size) {
        if regime == Regime::Low || r <= knee {
            boundary.push(BoundaryPoint {
                r,
                rd_cap: flat_cap,
                alpha: None,
            });
            continue;
        }
        let f = |a: f64| r_alpha(&params, a).map(|v| v - r).unwrap_or(f64::NAN);
        let alpha = bisect(f, lo, hi, 1e-15, RATE_SOLVE_TOL)
            .ok_or_else(|| Error::degenerate("R(alpha) - R on the alpha segment", f(lo)))?;
        boundary.push(BoundaryPoint {
            r,
            rd_cap: rz_alpha(&params, alpha)?,
            alpha: Some(alpha),
        });
    }
    Ok(CaseRegion {
        case_id,
        p,
        thresholds,
        regime,
        c_m,
        alpha_costa: alpha_c,
        knee_rate: knee,
        boundary,
    })
}

/// Case I region (identical states, degraded wiretapper with total noise
/// `N1 + N2`).
pub fn case1_region(p: f64, q: f64, n1: f64, n2: f64, grid_size: usize) -> Result<CaseRegion> {
    let regime = classify(p, case1_thresholds(q, n1, n2)?);
    case_region_in_regime(CaseId::CaseI, p, q, n1, n2, grid_size, regime)
}

/// Case II region (independent states of equal variance).
pub fn case2_region(p: f64, q: f64, n1: f64, n2: f64, grid_size: usize) -> Result<CaseRegion> {
    let regime = classify(p, case2_thresholds(q, n1, n2)?);
    case_region_in_regime(CaseId::CaseII, p, q, n1, n2, grid_size, regime)
}

/// Power margin `P' = P / (1 + 4 eps ln 2 + rho^2 / (1 - rho^2))` that keeps
/// the transmitted sequence inside the power constraint.
pub fn admissible_power(p: f64, epsilon: f64, rho_xv1: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::usage(format!("P must be positive, got {p}")));
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::usage(format!(
            "epsilon must be non-negative, got {epsilon}"
        )));
    }
    if rho_xv1.is_nan() || rho_xv1.abs() >= 1.0 {
        return Err(Error::usage(format!(
            "|rho_xv1| must be below 1, got {rho_xv1}"
        )));
    }
    let r2 = rho_xv1 * rho_xv1;
    Ok(p / (1.0 + 4.0 * epsilon * std::f64::consts::LN_2 + r2 / (1.0 - r2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn worked_thresholds() {
        let (p1, p2) = case1_thresholds(1.0, 0.25, 1.0).unwrap();
        assert_abs_diff_eq!(p1, -0.75 + 5f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p1, 0.368034, epsilon = 1e-6);
        assert_abs_diff_eq!(p2, 0.724745, epsilon = 1e-6);
        let (p3, p4) = case2_thresholds(1.0, 1.0, 1.0).unwrap();
        // sqrt(5 Q^2 + 4 Q (N2 - N1)) = sqrt(5) here.
        assert_abs_diff_eq!(p3, (5f64.sqrt() - 1.0) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p4, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn negative_discriminant_is_degenerate() {
        match case2_thresholds(1.0, 10.0, 1.0) {
            Err(Error::DegenerateGeometry { expr, value }) => {
                assert!(expr.contains("5 Q^2"));
                assert_eq!(value, 5.0 + 4.0 * (1.0 - 10.0));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            case1_thresholds(0.0, 1.0, 1.0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn admissible_power_examples() {
        assert_eq!(admissible_power(2.0, 0.0, 0.0).unwrap(), 2.0);
        assert_abs_diff_eq!(
            admissible_power(1.0, 0.01, 0.0).unwrap(),
            0.973_022_099_0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            admissible_power(1.0, 0.0, 0.5).unwrap(),
            0.75,
            epsilon = 1e-15
        );
        assert!(matches!(
            admissible_power(1.0, 0.0, 1.0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn low_regime_is_flat() {
        let reg = case1_region(0.2, 1.0, 0.25, 1.0, 11).unwrap();
        assert_eq!(reg.regime, Regime::Low);
        assert_abs_diff_eq!(reg.c_m, 0.5 * (0.45f64 / 0.25).log2(), epsilon = 1e-9);
        assert!(reg.boundary.iter().all(|b| b.rd_cap == reg.c_m));
    }

    #[test]
    fn high_regime_cap_at_knee() {
        let reg = case1_region(2.0, 1.0, 0.25, 1.0, 21).unwrap();
        assert_eq!(reg.regime, Regime::High);
        let params = GaussianWiretapParams::case_one(2.0, 1.0, 0.25, 1.0).unwrap();
        assert_abs_diff_eq!(reg.knee_rate, r_alpha(&params, 1.0).unwrap(), epsilon = 0.0);
        let at_knee = reg.boundary.iter().rfind(|b| b.r <= reg.knee_rate).unwrap();
        assert_abs_diff_eq!(
            at_knee.rd_cap,
            rz_alpha(&params, 1.0).unwrap(),
            epsilon = 1e-12
        );
    }
}
