use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use wiretap_core::discrete::{mi_profile, AuxiliaryPolicy, DiscreteWiretapModel};
use wiretap_core::gaussian::validate::{default_grid, sweep};
use wiretap_core::gaussian::{case1_thresholds, case2_thresholds};
use wiretap_core::prob::{compose, mutual_information, names};
use wiretap_core::sim::oracle::brute_force_posterior;
use wiretap_core::sim::{build_codebook, eavesdropper_posterior, SimConfig};
use wiretap_core::Error;

use super::absolute;
use crate::error::{CliError, CliResult};
use crate::output::{json_text, OutputSet};
use crate::settings::{read_text, resolve};

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateArgs {
    /// Additionally check this model file against every model invariant.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Seed recorded in the manifest (the suites are deterministic).
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Shipped fixtures, checked on every run.
pub const FIXTURES: [(&str, &str); 4] = [
    ("bsc_pair", include_str!("../../fixtures/bsc_pair.json")),
    (
        "z_independent",
        include_str!("../../fixtures/z_independent.json"),
    ),
    ("z_equals_y", include_str!("../../fixtures/z_equals_y.json")),
    (
        "corrupted_kernel",
        include_str!("../../fixtures/corrupted_kernel.json"),
    ),
];

pub const SIM_FIXTURES: [(&str, &str); 3] = [
    (
        "sim_reference",
        include_str!("../../fixtures/sim_reference.json"),
    ),
    (
        "sim_constant_wiretap",
        include_str!("../../fixtures/sim_constant_wiretap.json"),
    ),
    ("sim_tiny", include_str!("../../fixtures/sim_tiny.json")),
];

/// One failed check: which suite, which invariant, and the evidence.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub suite: String,
    pub invariant: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

struct Suite {
    name: &'static str,
    checks: usize,
    failures: Vec<Failure>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, invariant: &str, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure {
                suite: self.name.into(),
                invariant: invariant.into(),
                detail: detail(),
            });
        }
    }

    fn done(self) -> SuiteResult {
        SuiteResult {
            name: self.name.into(),
            passed: self.failures.is_empty(),
            checks: self.checks,
            failures: self.failures,
        }
    }
}

/// Names the model invariant a validation message refers to.
pub fn invariant_of(message: &str) -> String {
    let field = ["state_pmf", "main_kernel", "wiretap_kernel", "cards"]
        .into_iter()
        .find(|f| message.contains(f))
        .unwrap_or("model");
    let what = if message.contains("sums to") {
        "rows sum to 1"
    } else if message.contains("total mass") {
        "total mass is 1"
    } else if message.contains("entry") {
        "entries are finite and non-negative"
    } else if message.contains("shape") {
        "shape matches cards"
    } else if message.contains("JSON") || message.contains("line") {
        "well-formed JSON"
    } else {
        "structure"
    };
    format!("{field}: {what}")
}

fn policies_for(model: &DiscreteWiretapModel) -> Vec<AuxiliaryPolicy> {
    let c = model.cards();
    let nx = c.x;
    let mut out = Vec::new();
    for u_card in [2usize, 3] {
        // Smooth, state-dependent but otherwise arbitrary policies.
        let p = AuxiliaryPolicy::from_fn(model, u_card, |v1, v2, u, x| {
            let w = 1.0 + ((u + 2 * x + 3 * v1 + 5 * v2) % 7) as f64;
            let total: f64 = (0..u_card)
                .flat_map(|uu| {
                    (0..nx).map(move |xx| 1.0 + ((uu + 2 * xx + 3 * v1 + 5 * v2) % 7) as f64)
                })
                .sum();
            w / total
        });
        out.extend(p);
    }
    out
}

fn fixture_suite() -> SuiteResult {
    let mut s = Suite::new("fixtures");
    for (name, text) in FIXTURES {
        let parsed = DiscreteWiretapModel::from_json_str(text);
        if name == "corrupted_kernel" {
            let named = parsed.as_ref().err().map(|e| invariant_of(&e.to_string()));
            s.check(
                named.as_deref() == Some("wiretap_kernel: rows sum to 1"),
                "corrupted fixture is rejected with the row-sum invariant",
                || format!("{name}: got {named:?}"),
            );
        } else {
            s.check(parsed.is_ok(), "shipped model fixture parses", || {
                format!("{name}: {}", parsed.unwrap_err())
            });
        }
    }
    for (name, text) in SIM_FIXTURES {
        let parsed = SimConfig::from_json_str(text).and_then(|c| build_codebook(&c).map(|_| ()));
        s.check(parsed.is_ok(), "shipped simulation fixture builds", || {
            format!("{name}: {}", parsed.unwrap_err())
        });
    }
    s.done()
}

fn discrete_suite() -> SuiteResult {
    let mut s = Suite::new("discrete_oracle");
    for (name, text) in FIXTURES.iter().filter(|(n, _)| *n != "corrupted_kernel") {
        let Ok(model) = DiscreteWiretapModel::from_json_str(text) else {
            continue;
        };
        for policy in policies_for(&model) {
            let fast = mi_profile(&model, &policy);
            let joint = compose(
                model.state(),
                policy.kernel(),
                model.main(),
                model.wiretap(),
            );
            let (Ok(fast), Ok(joint)) = (fast, joint) else {
                s.check(false, "profile and joint law evaluate", || name.to_string());
                continue;
            };
            use names::*;
            for (label, got, a, b) in [
                ("I(U;Y)", fast.uy, &[U][..], &[Y][..]),
                ("I(U;V1,V2)", fast.uv12, &[U][..], &[V1, V2][..]),
                ("I(U;Z)", fast.uz, &[U][..], &[Z][..]),
            ] {
                let want = mutual_information(&joint, a, b).unwrap_or(f64::NAN);
                s.check(
                    (got - want).abs() <= 1e-12,
                    "pairwise-marginal MI equals joint-law MI",
                    || format!("{name} u_card={} {label}: {got} vs {want}", policy.u_card()),
                );
            }
        }
    }
    s.done()
}

fn threshold_suite() -> SuiteResult {
    let mut s = Suite::new("thresholds");
    let values: Vec<f64> = (0..10)
        .map(|i| 0.01 * 10f64.powf(i as f64 * 4.0 / 9.0))
        .collect();
    for &q in &values {
        for &n1 in &values {
            for &n2 in &values {
                let c1 = case1_thresholds(q, n1, n2);
                s.check(matches!(c1, Ok((a, b)) if a < b), "P1 < P2", || {
                    format!("Q={q} N1={n1} N2={n2}: {c1:?}")
                });
                // P3 is undefined (negative discriminant) when N1 > N2 + 5Q/4.
                match case2_thresholds(q, n1, n2) {
                    Ok((a, b)) => s.check(a < b, "P3 < P4", || {
                        format!("Q={q} N1={n1} N2={n2}: P3={a} P4={b}")
                    }),
                    Err(Error::DegenerateGeometry { value, .. }) => {
                        s.check(
                            value < 0.0 && n1 > n2 + 1.25 * q - 1e-12,
                            "P3 undefined only for N1 > N2 + 5Q/4",
                            || format!("Q={q} N1={n1} N2={n2}: discriminant {value}"),
                        );
                    }
                    Err(e) => s.check(false, "P3 < P4", || format!("Q={q} N1={n1} N2={n2}: {e}")),
                }
            }
        }
    }
    s.done()
}

fn simulator_suite() -> SuiteResult {
    let mut s = Suite::new("simulator_oracle");
    let Ok(cfg) = SimConfig::from_json_str(SIM_FIXTURES[2].1) else {
        s.check(false, "tiny simulation fixture parses", String::new);
        return s.done();
    };
    let cb = match build_codebook(&cfg) {
        Ok(cb) => cb,
        Err(e) => {
            s.check(false, "tiny simulation codebook builds", || e.to_string());
            return s.done();
        }
    };
    let nz = cfg.model.cards().z;
    let total = nz.pow(cfg.n as u32);
    for idx in 0..total {
        let mut rest = idx;
        let z: Vec<usize> = (0..cfg.n)
            .map(|_| {
                let d = rest % nz;
                rest /= nz;
                d
            })
            .collect();
        let fast = eavesdropper_posterior(&cb, &cfg, &z);
        let slow = brute_force_posterior(&cb, &cfg, &z);
        let err = match (&fast, &slow) {
            (Ok(a), Ok(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        };
        s.check(
            err <= 1e-12,
            "posterior equals brute-force enumeration",
            || format!("z={z:?}: max abs difference {err:e}"),
        );
    }
    s.done()
}

fn model_suite(path: &Path) -> CliResult<SuiteResult> {
    let mut s = Suite::new("model");
    let text = read_text(path)?;
    if let Err(e) = serde_json::from_str::<serde_json::Value>(&text) {
        return Err(CliError::input(path, e));
    }
    let parsed = DiscreteWiretapModel::from_json_str(&text);
    let invariant = parsed.as_ref().err().map(|e| invariant_of(&e.to_string()));
    s.check(
        parsed.is_ok(),
        invariant.as_deref().unwrap_or("model invariants"),
        || format!("{}: {}", path.display(), parsed.unwrap_err()),
    );
    Ok(s.done())
}

/// Runs every suite. Returns whether all passed.
pub fn run(flags: &ValidateArgs, config: Option<&Path>, out: &Path) -> CliResult<bool> {
    let mut s = resolve(flags, config, "validate")?;
    let seed = *s.seed.get_or_insert(0);
    let model = s.model.as_deref().map(absolute).transpose()?;
    s.model = model.clone();

    let (points, alphas) = default_grid();
    let report = sweep(&points, &alphas)?;
    let mut gauss = Suite::new("gaussian_closed_form");
    gauss.check(
        true,
        "closed form agrees with determinant oracle",
        String::new,
    );
    for v in report.violations() {
        gauss.check(false, "closed form agrees with determinant oracle", || {
            format!(
                "{} at {:?} alpha={:?}: printed {:?} oracle {}",
                v.quantity.as_str(),
                v.params,
                v.alpha,
                v.printed,
                v.oracle
            )
        });
    }
    gauss.check(
        !report.entries.is_empty(),
        "discrepancy report is non-empty",
        || format!("no entries above {:e}", report.report_tol),
    );

    let mut suites = vec![
        fixture_suite(),
        gauss.done(),
        threshold_suite(),
        discrete_suite(),
        simulator_suite(),
    ];
    if let Some(p) = &model {
        suites.push(model_suite(p)?);
    }
    let passed = suites.iter().all(|r| r.passed);
    let failures: Vec<&Failure> = suites.iter().flat_map(|r| &r.failures).collect();
    let summary = serde_json::json!({
        "passed": passed,
        "suites": suites,
        "failures": failures,
        "gaussian_sweep": {
            "points": report.points,
            "alphas": report.alphas.len(),
            "report_tol": report.report_tol,
            "quantities": report.summary,
            "listed": report.entries.len(),
        },
    });

    let mut set = OutputSet::create(out)?;
    set.write("validate.json", &json_text(&summary))?;
    set.write("discrepancies.csv", &report.to_csv())?;
    let inputs: Vec<&Path> = model.iter().map(PathBuf::as_path).collect();
    set.finish("validate", seed, &inputs, &s)?;
    Ok(passed)
}
