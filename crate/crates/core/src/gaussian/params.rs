use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance below zero accepted for the correlation determinant.
pub(crate) const PSD_TOL: f64 = 1e-12;

/// Powers, state variances, noise variances and the pairwise correlations of
/// `(X, V1, V2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianWiretapParams {
    pub p: f64,
    pub q1: f64,
    pub q2: f64,
    pub n1: f64,
    pub n2: f64,
    #[serde(default)]
    pub rho_xv1: f64,
    #[serde(default)]
    pub rho_xv2: f64,
    #[serde(default)]
    pub rho_v1v2: f64,
}

impl GaussianWiretapParams {
    /// Validated constructor.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p: f64,
        q1: f64,
        q2: f64,
        n1: f64,
        n2: f64,
        rho_xv1: f64,
        rho_xv2: f64,
        rho_v1v2: f64,
    ) -> Result<Self> {
        let g = GaussianWiretapParams {
            p,
            q1,
            q2,
            n1,
            n2,
            rho_xv1,
            rho_xv2,
            rho_v1v2,
        };
        g.validate()?;
        Ok(g)
    }

    /// Independent states and input.
    pub fn uncorrelated(p: f64, q1: f64, q2: f64, n1: f64, n2: f64) -> Result<Self> {
        Self::new(p, q1, q2, n1, n2, 0.0, 0.0, 0.0)
    }

    /// Identical states (`V1 = V2`, variance `q`) independent of the input,
    /// with the wiretapper observing a degraded version of the main output:
    /// its total noise is `n1 + n2`.
    pub fn case_one(p: f64, q: f64, n1: f64, n2: f64) -> Result<Self> {
        Self::new(p, q, q, n1, n1 + n2, 0.0, 0.0, 1.0)
    }

    /// Independent states of equal variance `q`, independent of the input.
    pub fn case_two(p: f64, q: f64, n1: f64, n2: f64) -> Result<Self> {
        Self::uncorrelated(p, q, q, n1, n2)
    }

    /// Determinant of the correlation matrix of `(X, V1, V2)`.
    pub fn correlation_det(&self) -> f64 {
        let (a, b, c) = (self.rho_xv1, self.rho_xv2, self.rho_v1v2);
        1.0 - a * a - b * b - c * c + 2.0 * a * b * c
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.p,
            self.q1,
            self.q2,
            self.n1,
            self.n2,
            self.rho_xv1,
            self.rho_xv2,
            self.rho_v1v2,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("Gaussian parameters must be finite"));
        }
        if self.p <= 0.0 {
            return Err(Error::validation(format!(
                "P must be positive, got {}",
                self.p
            )));
        }
        if self.q1 < 0.0 || self.q2 < 0.0 {
            return Err(Error::validation(
                "state variances Q1, Q2 must be non-negative",
            ));
        }
        if self.n1 <= 0.0 || self.n2 <= 0.0 {
            return Err(Error::validation("noise variances N1, N2 must be positive"));
        }
        for (name, r) in [
            ("rho_xv1", self.rho_xv1),
            ("rho_xv2", self.rho_xv2),
            ("rho_v1v2", self.rho_v1v2),
        ] {
            if r.abs() > 1.0 {
                return Err(Error::validation(format!(
                    "{name} = {r} lies outside [-1, 1]"
                )));
            }
        }
        let d = self.correlation_det();
        if d < -PSD_TOL {
            return Err(Error::validation(format!(
                "correlation matrix of (X, V1, V2) is not positive semidefinite: determinant {d}"
            )));
        }
        Ok(())
    }
}
