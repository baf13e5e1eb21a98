use rand_distr::weighted::WeightedIndex;
use serde::{Deserialize, Serialize};

use crate::discrete::{AuxiliaryPolicy, DiscreteWiretapModel};
use crate::{Error, Result};

/// Largest block length.
pub const MAX_BLOCK_LENGTH: usize = 16;
/// Largest `|V1| |V2|`.
pub const MAX_STATE_PAIRS: usize = 4;
/// Largest codebook.
pub const MAX_CODEBOOK: u128 = 1 << 20;
/// Largest `N log2(|V1| |V2|)`, the exponent of the state enumeration.
pub const MAX_STATE_BITS: f64 = 20.0;
/// Largest `codebook size x |V1|^N` (encoder lookup table).
pub const MAX_ENCODER_TABLE: u128 = 1 << 26;

/// One simulation setup. `rate` fixes the message count
/// `M = 2^floor(N rate)`; a single slack `epsilon` governs every
/// typicality test.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub model: DiscreteWiretapModel,
    pub policy: AuxiliaryPolicy,
    pub n: usize,
    pub rate: f64,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimDoc {
    model: serde_json::Value,
    policy: serde_json::Value,
    n: usize,
    rate: f64,
    epsilon: f64,
    trials: usize,
    seed: u64,
}

impl SimConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: SimDoc = serde_json::from_str(s)
            .map_err(|e| Error::validation(format!("simulation config JSON: {e}")))?;
        let cfg = SimConfig {
            model: DiscreteWiretapModel::from_json_str(&doc.model.to_string())?,
            policy: AuxiliaryPolicy::from_json_str(&doc.policy.to_string())?,
            n: doc.n,
            rate: doc.rate,
            epsilon: doc.epsilon,
            trials: doc.trials,
            seed: doc.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json_string(&self) -> String {
        let doc = SimDoc {
            model: serde_json::from_str(&self.model.to_json_string()).expect("model JSON"),
            policy: serde_json::from_str(&self.policy.to_json_string()).expect("policy JSON"),
            n: self.n,
            rate: self.rate,
            epsilon: self.epsilon,
            trials: self.trials,
            seed: self.seed,
        };
        serde_json::to_string_pretty(&doc).expect("config serialises")
    }

    /// Number of messages `2^floor(N rate)`.
    pub fn message_count(&self) -> usize {
        1usize << ((self.n as f64 * self.rate + 1e-9).floor().max(0.0) as u32)
    }

    pub fn validate(&self) -> Result<()> {
        self.policy.check_against(&self.model)?;
        if self.n == 0 || self.n > MAX_BLOCK_LENGTH {
            return Err(Error::CapExceeded {
                what: "block length",
                requested: self.n as u128,
                cap: MAX_BLOCK_LENGTH as u128,
            });
        }
        let c = self.model.cards();
        let pairs = c.v1 * c.v2;
        if pairs > MAX_STATE_PAIRS {
            return Err(Error::CapExceeded {
                what: "state pairs |V1||V2|",
                requested: pairs as u128,
                cap: MAX_STATE_PAIRS as u128,
            });
        }
        if self.n as f64 * (pairs as f64).log2() > MAX_STATE_BITS {
            return Err(Error::CapExceeded {
                what: "state enumeration (|V1||V2|)^N",
                requested: (pairs as u128).pow(self.n as u32),
                cap: 1 << 20,
            });
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::usage(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.trials == 0 {
            return Err(Error::usage("trials must be at least 1"));
        }
        if !(self.rate.is_finite() && self.rate > 0.0) {
            return Err(Error::usage(format!(
                "rate must be positive, got {}",
                self.rate
            )));
        }
        if (self.n as f64 * self.rate + 1e-9).floor() < 1.0 {
            return Err(Error::InfeasibleRate(format!(
                "N * rate = {} gives fewer than 2 messages",
                self.n as f64 * self.rate
            )));
        }
        if (self.n as f64 * self.rate) > 62.0 {
            return Err(Error::InfeasibleRate("message count overflows".into()));
        }
        Ok(())
    }
}

/// Single-letter laws derived from the model and the policy, shared by the
/// codebook, the coders and the posterior.
#[derive(Debug, Clone)]
pub(crate) struct Laws {
    pub nu: usize,
    pub nx: usize,
    pub nv1: usize,
    pub nv2: usize,
    pub ny: usize,
    pub nz: usize,
    pub p_u: Vec<f64>,
    /// `log2 p(u, v1)` indexed `[u * nv1 + v1]`.
    pub log_uv1: Vec<f64>,
    pub h_uv1: f64,
    /// `log2 p(u, y)` indexed `[u * ny + y]`.
    pub log_uy: Vec<f64>,
    pub h_uy: f64,
    /// `p(x | u, v1)` indexed `[(u * nv1 + v1) * nx + x]`.
    pub x_given_uv1: Vec<f64>,
    pub state_sampler: WeightedIndex<f64>,
    pub x_sampler: Vec<WeightedIndex<f64>>,
    pub y_sampler: Vec<WeightedIndex<f64>>,
    pub z_sampler: Vec<WeightedIndex<f64>>,
}

fn entropy_and_logs(p: &[f64]) -> (f64, Vec<f64>) {
    let logs: Vec<f64> = p
        .iter()
        .map(|&v| if v > 0.0 { v.log2() } else { f64::NEG_INFINITY })
        .collect();
    let h = p
        .iter()
        .zip(&logs)
        .filter(|(v, _)| **v > 0.0)
        .map(|(v, l)| -v * l)
        .sum();
    (h, logs)
}

fn sampler(row: &[f64]) -> WeightedIndex<f64> {
    WeightedIndex::new(row.iter().copied()).expect("stochastic row has positive mass")
}

impl Laws {
    pub fn new(cfg: &SimConfig) -> Self {
        let m = &cfg.model;
        let pol = &cfg.policy;
        let c = m.cards();
        let (nu, nx, nv1, nv2, ny, nz) = (pol.u_card(), c.x, c.v1, c.v2, c.y, c.z);

        // p(u, x, v1) = sum_v2 p(v1, v2) p(u, x | v1, v2)
        let mut p_uxv1 = vec![0.0; nu * nx * nv1];
        let mut p_uy = vec![0.0; nu * ny];
        for u in 0..nu {
            for x in 0..nx {
                for v1 in 0..nv1 {
                    for v2 in 0..nv2 {
                        let w = m.p_state(v1, v2) * pol.prob(v1, v2, u, x);
                        p_uxv1[(u * nx + x) * nv1 + v1] += w;
                        for y in 0..ny {
                            p_uy[u * ny + y] += w * m.p_main(x, v1, y);
                        }
                    }
                }
            }
        }
        let mut p_uv1 = vec![0.0; nu * nv1];
        let mut p_ux = vec![0.0; nu * nx];
        for u in 0..nu {
            for x in 0..nx {
                for v1 in 0..nv1 {
                    let w = p_uxv1[(u * nx + x) * nv1 + v1];
                    p_uv1[u * nv1 + v1] += w;
                    p_ux[u * nx + x] += w;
                }
            }
        }
        let p_u: Vec<f64> = (0..nu)
            .map(|u| p_ux[u * nx..(u + 1) * nx].iter().sum())
            .collect();

        // p(x | u, v1), falling back to p(x | u) and then to uniform on
        // zero-probability conditioning events.
        let mut x_given_uv1 = vec![0.0; nu * nv1 * nx];
        for u in 0..nu {
            for v1 in 0..nv1 {
                let den = p_uv1[u * nv1 + v1];
                for x in 0..nx {
                    x_given_uv1[(u * nv1 + v1) * nx + x] = if den > 0.0 {
                        p_uxv1[(u * nx + x) * nv1 + v1] / den
                    } else if p_u[u] > 0.0 {
                        p_ux[u * nx + x] / p_u[u]
                    } else {
                        1.0 / nx as f64
                    };
                }
            }
        }
        let (h_uv1, log_uv1) = entropy_and_logs(&p_uv1);
        let (h_uy, log_uy) = entropy_and_logs(&p_uy);
        let state: Vec<f64> = m.state().table().to_vec();
        Laws {
            nu,
            nx,
            nv1,
            nv2,
            ny,
            nz,
            p_u,
            log_uv1,
            h_uv1,
            log_uy,
            h_uy,
            x_sampler: x_given_uv1.chunks(nx).map(sampler).collect(),
            x_given_uv1,
            state_sampler: sampler(&state),
            y_sampler: m.main().table().chunks(ny).map(sampler).collect(),
            z_sampler: m.wiretap().table().chunks(nz).map(sampler).collect(),
        }
    }

    pub fn p_x(&self, x: usize, u: usize, v1: usize) -> f64 {
        self.x_given_uv1[(u * self.nv1 + v1) * self.nx + x]
    }
}
