//! Reference closed forms for the dirty-paper auxiliary. They serve only
//! as a second code path for agreement tests against the covariance
//! oracle; region construction never uses them.
//!
//! Shorthand used below, with `a1 = rho_xv1 sqrt(P Q1)`,
//! `a2 = rho_xv2 sqrt(P Q2)`, `c12 = rho_v1v2 sqrt(Q1 Q2)`:
//!
//! * `var_u = P + alpha^2 Q1 + 2 alpha a1`
//! * `var_y = P + Q1 + N1 + 2 a1`
//! * `var_z = P + Q2 + N2 + 2 a2`
//! * `cov_uy = P + alpha Q1 + (alpha + 1) a1`
//! * `cov_uz = P + a2 + alpha a1 + alpha c12`
//! * `D = 1 - rho_xv1^2 - rho_xv2^2 - rho_v1v2^2 + 2 rho_xv1 rho_xv2 rho_v1v2`

use super::GaussianWiretapParams;
use crate::{Error, Result};

struct Terms {
    a1: f64,
    a2: f64,
    c12: f64,
    var_u: f64,
    var_y: f64,
    var_z: f64,
    cov_uy: f64,
    cov_uz: f64,
    d: f64,
}

fn terms(g: &GaussianWiretapParams, alpha: f64) -> Terms {
    let a1 = g.rho_xv1 * (g.p * g.q1).sqrt();
    let a2 = g.rho_xv2 * (g.p * g.q2).sqrt();
    let c12 = g.rho_v1v2 * (g.q1 * g.q2).sqrt();
    Terms {
        a1,
        a2,
        c12,
        var_u: g.p + alpha * alpha * g.q1 + 2.0 * alpha * a1,
        var_y: g.p + g.q1 + g.n1 + 2.0 * a1,
        var_z: g.p + g.q2 + g.n2 + 2.0 * a2,
        cov_uy: g.p + alpha * g.q1 + (alpha + 1.0) * a1,
        cov_uz: g.p + a2 + alpha * a1 + alpha * c12,
        d: g.correlation_det(),
    }
}

/// `1/2 log2(num / den)`, refusing non-positive or non-finite pieces.
fn half_log2(num: f64, num_expr: &str, den: f64, den_expr: &str) -> Result<f64> {
    if !(num.is_finite() && num > 0.0) {
        return Err(Error::degenerate(num_expr, num));
    }
    if !(den.is_finite() && den > 0.0) {
        return Err(Error::degenerate(den_expr, den));
    }
    let ratio = num / den;
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::degenerate(
            format!("({num_expr}) / ({den_expr})"),
            ratio,
        ));
    }
    Ok(0.5 * ratio.log2())
}

/// Printed `I(U;Y)`.
pub fn mi_uy(g: &GaussianWiretapParams, alpha: f64) -> Result<f64> {
    g.validate()?;
    let t = terms(g, alpha);
    half_log2(
        t.var_u * t.var_y,
        "var_u * var_y",
        t.var_u * t.var_y - t.cov_uy * t.cov_uy,
        "var_u * var_y - cov_uy^2",
    )
}

/// Printed `I(U;V1,V2)`.
pub fn mi_uv12(g: &GaussianWiretapParams, alpha: f64) -> Result<f64> {
    g.validate()?;
    let t = terms(g, alpha);
    half_log2(
        (1.0 - g.rho_v1v2 * g.rho_v1v2) * t.var_u,
        "(1 - rho_v1v2^2) * var_u",
        g.p * t.d,
        "P * D",
    )
}

/// Printed `I(U;Z)`.
pub fn mi_uz(g: &GaussianWiretapParams, alpha: f64) -> Result<f64> {
    g.validate()?;
    let t = terms(g, alpha);
    half_log2(
        t.var_u * t.var_z,
        "var_u * var_z",
        t.var_u * t.var_z - t.cov_uz * t.cov_uz,
        "var_u * var_z - cov_uz^2",
    )
}

/// Printed leakage function `I(U;Z) - I(U;V1,V2)` as a single ratio.
pub fn leakage(g: &GaussianWiretapParams, alpha: f64) -> Result<f64> {
    g.validate()?;
    let t = terms(g, alpha);
    half_log2(
        g.p * t.var_z * t.d,
        "P * var_z * D",
        t.var_u * t.var_z - t.cov_uz * t.cov_uz,
        "var_u * var_z - cov_uz^2",
    )
}

/// Printed leakage at `alpha = 0`.
pub fn leakage_at_zero(g: &GaussianWiretapParams) -> Result<f64> {
    g.validate()?;
    let t = terms(g, 0.0);
    half_log2(
        t.var_z * t.d,
        "var_z * D",
        g.q2 * (1.0 - g.rho_xv2 * g.rho_xv2) + g.n2 + 2.0 * t.a2,
        "Q2 (1 - rho_xv2^2) + N2 + 2 a2",
    )
}

/// Printed maximiser of the leakage function (note the `sqrt(P Q1)` inside
/// the second factor of the numerator and the factor 2 in the denominator,
/// both as printed).
pub fn alpha_star(g: &GaussianWiretapParams) -> Result<f64> {
    g.validate()?;
    let t = terms(g, 0.0);
    let lead = t.a1 + t.c12;
    let num = lead * (g.p + g.rho_xv2 * (g.p * g.q1).sqrt()) - t.a1 * t.var_z;
    let den = lead * lead - 2.0 * g.q1 * t.var_z;
    if den.abs() <= 1e-12 {
        return Err(Error::degenerate("(a1 + c12)^2 - 2 Q1 var_z", den));
    }
    Ok(-num / den)
}
