//! Agreement sweep between the printed closed forms and the covariance
//! oracle.
//!
//! Every comparison whose absolute difference exceeds [`REPORT_TOL`] (or
//! where the closed form cannot be evaluated) is listed in the
//! [`DiscrepancyReport`]. The printed leakage function, its `alpha = 0`
//! specialisation and the printed maximiser are known to deviate from the
//! oracle once correlations are present; they form the documented
//! discrepancy list. Any listed mutual-information comparison above
//! [`VIOLATION_TOL`] is a violation.

use rayon::prelude::*;
use serde::Serialize;

use super::{alpha_star, closed_form, mi_triple, GaussianWiretapParams};
use crate::Result;

/// Comparisons that differ by more than this are listed in the report.
pub const REPORT_TOL: f64 = 1e-9;

/// Listed mutual-information comparisons above this are violations.
pub const VIOLATION_TOL: f64 = 1e-6;

/// Only grid points whose correlation determinant exceeds this are used.
pub const MIN_CORRELATION_DET: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    MiUy,
    MiUv12,
    MiUz,
    Leakage,
    LeakageAtZero,
    AlphaStar,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::MiUy,
        Quantity::MiUv12,
        Quantity::MiUz,
        Quantity::Leakage,
        Quantity::LeakageAtZero,
        Quantity::AlphaStar,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::MiUy => "mi_uy",
            Quantity::MiUv12 => "mi_uv12",
            Quantity::MiUz => "mi_uz",
            Quantity::Leakage => "leakage",
            Quantity::LeakageAtZero => "leakage_at_zero",
            Quantity::AlphaStar => "alpha_star",
        }
    }

    /// Printed forms known to deviate from the oracle.
    pub fn is_documented_discrepancy(&self) -> bool {
        matches!(
            self,
            Quantity::Leakage | Quantity::LeakageAtZero | Quantity::AlphaStar
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub quantity: Quantity,
    pub params: GaussianWiretapParams,
    pub alpha: Option<f64>,
    pub printed: Option<f64>,
    pub oracle: f64,
    pub abs_err: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantitySummary {
    pub quantity: Quantity,
    pub compared: usize,
    pub listed: usize,
    pub max_abs_err: f64,
    pub documented: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub points: usize,
    pub alphas: Vec<f64>,
    pub report_tol: f64,
    pub summary: Vec<QuantitySummary>,
    pub entries: Vec<Discrepancy>,
}

impl DiscrepancyReport {
    /// Listed comparisons outside the documented discrepancy list that
    /// exceed [`VIOLATION_TOL`] (or failed to evaluate).
    pub fn violations(&self) -> Vec<&Discrepancy> {
        self.entries
            .iter()
            .filter(|d| !d.quantity.is_documented_discrepancy())
            .filter(|d| d.abs_err.is_none_or(|e| e > VIOLATION_TOL))
            .collect()
    }

    /// CSV listing of every entry.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "quantity,p,q1,q2,n1,n2,rho_xv1,rho_xv2,rho_v1v2,alpha,printed,oracle,abs_err,note\n",
        );
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for d in &self.entries {
            let g = d.params;
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                d.quantity.as_str(),
                g.p,
                g.q1,
                g.q2,
                g.n1,
                g.n2,
                g.rho_xv1,
                g.rho_xv2,
                g.rho_v1v2,
                opt(d.alpha),
                opt(d.printed),
                d.oracle,
                opt(d.abs_err),
                d.note.as_deref().unwrap_or("").replace(',', ";"),
            ));
        }
        s
    }
}

/// Default sweep: `P x Q1 x rho_xv1 x rho_xv2 x rho_v1v2` (Q2, N1, N2 cycled
/// with the point index), restricted to correlation determinants above
/// [`MIN_CORRELATION_DET`]; alpha from -2 to 2 in steps of 0.25.
pub fn default_grid() -> (Vec<GaussianWiretapParams>, Vec<f64>) {
    const P: [f64; 3] = [0.3, 1.0, 4.0];
    const Q1: [f64; 2] = [0.5, 2.0];
    const RHO: [f64; 9] = [-0.9, -0.6, -0.3, -0.1, 0.0, 0.2, 0.5, 0.8, 0.95];
    const Q2: [f64; 3] = [1.5, 0.7, 3.0];
    const N1: [f64; 4] = [0.5, 1.0, 0.2, 2.0];
    const N2: [f64; 3] = [1.0, 0.3, 2.5];
    let mut points = Vec::new();
    for &p in &P {
        for &q1 in &Q1 {
            for &a in &RHO {
                for &b in &RHO {
                    for &c in &RHO {
                        let i = points.len();
                        let g = GaussianWiretapParams {
                            p,
                            q1,
                            q2: Q2[i % Q2.len()],
                            n1: N1[i % N1.len()],
                            n2: N2[i % N2.len()],
                            rho_xv1: a,
                            rho_xv2: b,
                            rho_v1v2: c,
                        };
                        if g.correlation_det() > MIN_CORRELATION_DET {
                            points.push(g);
                        }
                    }
                }
            }
        }
    }
    let alphas = (0..=16).map(|k| -2.0 + 0.25 * k as f64).collect();
    (points, alphas)
}

fn compare(
    out: &mut Vec<(Quantity, Option<Discrepancy>, f64)>,
    quantity: Quantity,
    params: &GaussianWiretapParams,
    alpha: Option<f64>,
    printed: Result<f64>,
    oracle: f64,
) {
    let (printed, err, note) = match printed {
        Ok(v) => (Some(v), Some((v - oracle).abs()), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    // Two infinities agree.
    let err = match (printed, err) {
        (Some(v), Some(_)) if v == oracle => Some(0.0),
        (_, e) => e,
    };
    let listed = err.is_none_or(|e| e.is_nan() || e > REPORT_TOL);
    let entry = listed.then_some(Discrepancy {
        quantity,
        params: *params,
        alpha,
        printed,
        oracle,
        abs_err: err,
        note,
    });
    out.push((quantity, entry, err.unwrap_or(f64::NAN)));
}

fn check_point(
    g: &GaussianWiretapParams,
    alphas: &[f64],
) -> Result<Vec<(Quantity, Option<Discrepancy>, f64)>> {
    let mut out = Vec::new();
    for &a in alphas {
        let m = mi_triple(g, a)?;
        compare(
            &mut out,
            Quantity::MiUy,
            g,
            Some(a),
            closed_form::mi_uy(g, a),
            m.uy,
        );
        compare(
            &mut out,
            Quantity::MiUv12,
            g,
            Some(a),
            closed_form::mi_uv12(g, a),
            m.uv12,
        );
        compare(
            &mut out,
            Quantity::MiUz,
            g,
            Some(a),
            closed_form::mi_uz(g, a),
            m.uz,
        );
        compare(
            &mut out,
            Quantity::Leakage,
            g,
            Some(a),
            closed_form::leakage(g, a),
            m.uz - m.uv12,
        );
    }
    let m0 = mi_triple(g, 0.0)?;
    compare(
        &mut out,
        Quantity::LeakageAtZero,
        g,
        Some(0.0),
        closed_form::leakage_at_zero(g),
        m0.uz - m0.uv12,
    );
    match alpha_star(g) {
        Ok(s) => {
            let printed = match (s.printed, &s.printed_error) {
                (Some(v), _) => Ok(v),
                (None, Some(e)) => Err(crate::Error::Validation(e.clone())),
                (None, None) => unreachable!("printed value or error is always set"),
            };
            compare(&mut out, Quantity::AlphaStar, g, None, printed, s.value);
        }
        Err(e) => out.push((
            Quantity::AlphaStar,
            Some(Discrepancy {
                quantity: Quantity::AlphaStar,
                params: *g,
                alpha: None,
                printed: closed_form::alpha_star(g).ok(),
                oracle: f64::NAN,
                abs_err: None,
                note: Some(format!("maximiser undefined: {e}")),
            }),
            f64::NAN,
        )),
    }
    Ok(out)
}

/// Runs the agreement sweep over `points x alphas` (in parallel, with
/// entries in grid order).
pub fn sweep(points: &[GaussianWiretapParams], alphas: &[f64]) -> Result<DiscrepancyReport> {
    let per_point = points
        .par_iter()
        .map(|g| check_point(g, alphas))
        .collect::<Result<Vec<_>>>()?;
    let mut summary: Vec<QuantitySummary> = Quantity::ALL
        .iter()
        .map(|&q| QuantitySummary {
            quantity: q,
            compared: 0,
            listed: 0,
            max_abs_err: 0.0,
            documented: q.is_documented_discrepancy(),
        })
        .collect();
    let mut entries = Vec::new();
    for (q, entry, err) in per_point.into_iter().flatten() {
        let s = summary
            .iter_mut()
            .find(|s| s.quantity == q)
            .expect("known quantity");
        s.compared += 1;
        if err.is_finite() {
            s.max_abs_err = s.max_abs_err.max(err);
        }
        if let Some(e) = entry {
            s.listed += 1;
            entries.push(e);
        }
    }
    Ok(DiscrepancyReport {
        points: points.len(),
        alphas: alphas.to_vec(),
        report_tol: REPORT_TOL,
        summary,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_large_enough() {
        let (points, alphas) = default_grid();
        assert!(points.len() >= 2000, "{}", points.len());
        assert_eq!(alphas.len(), 17);
        assert!(points.iter().all(|g| g.validate().is_ok()));
    }

    #[test]
    fn uncorrelated_point_has_no_discrepancies() {
        let g = GaussianWiretapParams::uncorrelated(1.0, 1.0, 2.0, 0.5, 1.5).unwrap();
        let r = sweep(&[g], &[-1.0, 0.0, 0.5, 2.0]).unwrap();
        assert!(r.entries.is_empty(), "{:?}", r.entries);
    }

    #[test]
    fn correlated_point_lists_printed_leakage() {
        let g = GaussianWiretapParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.3, 0.2, 0.4).unwrap();
        let r = sweep(&[g], &[0.5]).unwrap();
        assert!(r.violations().is_empty());
        assert!(r.entries.iter().any(|d| d.quantity == Quantity::Leakage));
        assert!(r.entries.iter().any(|d| d.quantity == Quantity::AlphaStar));
        assert!(r.to_csv().lines().count() == r.entries.len() + 1);
    }
}
