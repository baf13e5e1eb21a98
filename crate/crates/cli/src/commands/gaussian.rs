use std::fmt::Write as _;
use std::path::Path;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use wiretap_core::gaussian::{
    alpha_star, case1_region, case2_region, leakage, leakage_roots, mi_triple, r_alpha, rz_alpha,
    GaussianWiretapParams,
};
use wiretap_core::Error;

use crate::error::{CliError, CliResult};
use crate::output::{json_text, OutputSet};
use crate::settings::{required, resolve};

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianScanArgs {
    /// Input power P.
    #[arg(long)]
    pub p: Option<f64>,
    /// Main-channel state variance Q1.
    #[arg(long)]
    pub q1: Option<f64>,
    /// Wiretap-channel state variance Q2.
    #[arg(long)]
    pub q2: Option<f64>,
    /// Main-channel noise variance N1.
    #[arg(long)]
    pub n1: Option<f64>,
    /// Wiretap-channel noise variance N2.
    #[arg(long)]
    pub n2: Option<f64>,
    /// Correlation between X and V1.
    #[arg(long, allow_hyphen_values = true)]
    pub rho_xv1: Option<f64>,
    /// Correlation between X and V2.
    #[arg(long, allow_hyphen_values = true)]
    pub rho_xv2: Option<f64>,
    /// Correlation between V1 and V2.
    #[arg(long, allow_hyphen_values = true)]
    pub rho_v1v2: Option<f64>,
    /// First alpha of the sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_min: Option<f64>,
    /// Last alpha of the sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_max: Option<f64>,
    /// Sweep step.
    #[arg(long)]
    pub step: Option<f64>,
    /// Seed recorded in the manifest (the computation is deterministic).
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Largest number of sweep rows.
const MAX_SWEEP_ROWS: usize = 10_000_000;

pub fn alpha_grid(min: f64, max: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(CliError::usage(format!(
            "step must be positive, got {step}"
        )));
    }
    if !(min.is_finite() && max.is_finite() && max >= min) {
        return Err(CliError::usage(format!(
            "alpha range [{min}, {max}] is empty"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() + 1.0;
    if count > MAX_SWEEP_ROWS as f64 {
        return Err(CliError::usage(format!(
            "sweep of {count} rows exceeds {MAX_SWEEP_ROWS}"
        )));
    }
    Ok((0..count as usize).map(|i| min + i as f64 * step).collect())
}

pub fn run_scan(flags: &GaussianScanArgs, config: Option<&Path>, out: &Path) -> CliResult<()> {
    let mut s = resolve(flags, config, "gaussian-scan")?;
    let params = GaussianWiretapParams::new(
        required(s.p, "p")?,
        required(s.q1, "q1")?,
        required(s.q2, "q2")?,
        required(s.n1, "n1")?,
        required(s.n2, "n2")?,
        *s.rho_xv1.get_or_insert(0.0),
        *s.rho_xv2.get_or_insert(0.0),
        *s.rho_v1v2.get_or_insert(0.0),
    )?;
    let grid = alpha_grid(
        *s.alpha_min.get_or_insert(-2.0),
        *s.alpha_max.get_or_insert(2.0),
        *s.step.get_or_insert(0.01),
    )?;
    let seed = *s.seed.get_or_insert(0);

    let mut csv = String::from("alpha,mi_uy,mi_uv12,mi_uz,deltaI,R,RZ\n");
    for &a in &grid {
        let t = mi_triple(&params, a)?;
        let _ = writeln!(
            csv,
            "{a},{},{},{},{},{},{}",
            t.uy,
            t.uv12,
            t.uz,
            leakage(&params, a)?,
            r_alpha(&params, a)?,
            rz_alpha(&params, a)?
        );
    }
    let star = match alpha_star(&params) {
        Ok(a) => json!({
            "value": a.value,
            "max_leakage": a.max_leakage,
            "printed": a.printed,
            "printed_error": a.printed_error,
            "printed_shortfall": a.printed_shortfall,
        }),
        Err(Error::DegenerateGeometry { expr, value }) => json!({
            "value": null,
            "degenerate": expr,
            "degenerate_value": value,
        }),
        Err(e) => return Err(e.into()),
    };
    let roots = leakage_roots(&params)?;
    let footer = json!({
        "params": params,
        "rows": grid.len(),
        "alpha_star": star,
        "roots": {
            "neg": roots.neg,
            "pos": roots.pos,
            "deltaI_at_neg": roots.neg.map(|a| leakage(&params, a)).transpose()?,
            "deltaI_at_pos": roots.pos.map(|a| leakage(&params, a)).transpose()?,
        },
    });

    let mut set = OutputSet::create(out)?;
    set.write("scan.csv", &csv)?;
    set.write("scan.json", &json_text(&footer))?;
    set.finish("gaussian-scan", seed, &[], &s)
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianRegionArgs {
    /// Special case: `case1` (identical states, degraded wiretapper) or
    /// `case2` (independent states).
    #[arg(long = "case", value_parser = ["case1", "case2"])]
    pub case: Option<String>,
    /// Input power P.
    #[arg(long)]
    pub p: Option<f64>,
    /// State variance Q.
    #[arg(long)]
    pub q: Option<f64>,
    /// Main-channel noise variance N1.
    #[arg(long)]
    pub n1: Option<f64>,
    /// Wiretap-channel noise variance N2.
    #[arg(long)]
    pub n2: Option<f64>,
    /// Number of boundary samples over [0, C_M].
    #[arg(long)]
    pub grid: Option<usize>,
    /// Seed recorded in the manifest (the computation is deterministic).
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn run_region(flags: &GaussianRegionArgs, config: Option<&Path>, out: &Path) -> CliResult<()> {
    let mut s = resolve(flags, config, "gaussian-region")?;
    let case = required(s.case.clone(), "case")?;
    let (p, q, n1, n2) = (
        required(s.p, "p")?,
        required(s.q, "q")?,
        required(s.n1, "n1")?,
        required(s.n2, "n2")?,
    );
    let grid = *s.grid.get_or_insert(101);
    let seed = *s.seed.get_or_insert(0);
    let (region, names) = match case.as_str() {
        "case1" => (case1_region(p, q, n1, n2, grid)?, ("P1", "P2")),
        "case2" => (case2_region(p, q, n1, n2, grid)?, ("P3", "P4")),
        other => return Err(CliError::usage(format!("unknown case `{other}`"))),
    };
    let mut thresholds = Map::new();
    thresholds.insert(names.0.into(), json!(region.thresholds.0));
    thresholds.insert(names.1.into(), json!(region.thresholds.1));

    let mut csv = String::from("P,regime,R,Rd_cap\n");
    for b in &region.boundary {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            region.p,
            region.regime.as_str(),
            b.r,
            b.rd_cap
        );
    }
    let mut set = OutputSet::create(out)?;
    set.write("thresholds.json", &json_text(&Value::Object(thresholds)))?;
    set.write("region.csv", &csv)?;
    set.finish("gaussian-region", seed, &[], &s)
}

#[cfg(test)]
mod tests {
    use super::alpha_grid;

    #[test]
    fn grid_includes_both_ends() {
        let g = alpha_grid(-2.0, 2.0, 0.25).unwrap();
        assert_eq!(g.len(), 17);
        assert_eq!(g[0], -2.0);
        assert_eq!(g[16], 2.0);
        assert!(alpha_grid(0.0, 1.0, 0.0).is_err());
        assert!(alpha_grid(1.0, 0.0, 0.1).is_err());
    }
}
