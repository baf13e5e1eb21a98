use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    mi_profile, AuxiliaryPolicy, DiscreteWiretapModel, MiProfile, RateTriplet, RegionPointSet,
};
use crate::{Error, Result};

/// Hard cap on the number of grid policies a single search may enumerate.
pub const MAX_GRID_POLICIES: usize = 2_000_000;

/// Dirichlet concentrations cycled over random policy indices: a mix of
/// flat and sparse conditionals.
const CONCENTRATIONS: [f64; 4] = [1.0, 0.5, 0.2, 0.05];

/// Which states the searched policy may depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PolicyMode {
    /// `p(u, x | v1, v2)`.
    #[default]
    Full,
    /// `p(u, x | v1)`, broadcast over `v2`.
    MainStateOnly,
}

/// Policy enumeration strategy. Policies are indexed: grid policies come
/// first (when a grid is configured), followed by `random_samples` Dirichlet
/// draws whose randomness depends only on `(seed, index)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub u_card: usize,
    pub random_samples: usize,
    /// Grid resolution `k`: every conditional row ranges over the
    /// compositions of the simplex at step `1/k`.
    pub grid_step: Option<usize>,
    pub seed: u64,
    pub mode: PolicyMode,
    /// Number of samples of the curve `R d = r_u1` emitted per frontier
    /// policy, endpoints included.
    pub curve_points: usize,
}

impl SearchConfig {
    pub fn random(u_card: usize, random_samples: usize, seed: u64) -> Self {
        SearchConfig {
            u_card,
            random_samples,
            grid_step: None,
            seed,
            mode: PolicyMode::Full,
            curve_points: 16,
        }
    }

    pub fn with_mode(mut self, mode: PolicyMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_grid(mut self, k: usize) -> Self {
        self.grid_step = Some(k);
        self
    }
}

/// One evaluated policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyEvaluation {
    pub id: usize,
    pub profile: MiProfile,
    pub triplet: RateTriplet,
}

/// Every policy evaluated by a search, in index order.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub evaluations: Vec<PolicyEvaluation>,
    config: SearchConfig,
    rows: usize,
    grid: Vec<Vec<usize>>,
}

/// First index attaining the maximum of `f`; `None` for an empty list.
fn argmax(
    evals: &[PolicyEvaluation],
    f: impl Fn(&PolicyEvaluation) -> f64,
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for e in evals {
        let v = f(e);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((e.id, v));
        }
    }
    best
}

fn floored(best: Option<(usize, f64)>) -> (f64, Option<usize>) {
    match best {
        Some((id, v)) if v > 0.0 => (v, Some(id)),
        _ => (0.0, None),
    }
}

impl SearchOutcome {
    /// `max(r_u1, 0)` maximised over the search, with the first maximiser
    /// (absent when no policy has positive `r_u1`).
    pub fn secrecy_rate(&self) -> (f64, Option<usize>) {
        floored(argmax(&self.evaluations, |e| e.triplet.r_u1))
    }

    /// Largest `I(U;Y) - I(U;V1)` over the search, floored at 0 (a constant
    /// auxiliary always achieves 0), with the first maximiser when positive.
    pub fn main_channel_capacity(&self) -> (f64, Option<usize>) {
        floored(argmax(&self.evaluations, |e| e.profile.gp_rate()))
    }

    /// Largest `I(U;Y) - I(U;Z)` over the search, floored at 0.
    pub fn wiretap_gap(&self) -> (f64, Option<usize>) {
        floored(argmax(&self.evaluations, |e| e.profile.wiretap_gap()))
    }

    /// `min{C_M estimate, max (I(U;Y) - I(U;Z))}`.
    pub fn upper_bound(&self) -> f64 {
        self.main_channel_capacity().0.min(self.wiretap_gap().0)
    }

    pub fn region(&self) -> RegionPointSet {
        RegionPointSet::from_evaluations(&self.evaluations, self.config.curve_points)
    }

    /// Rebuilds the policy with a given index.
    pub fn policy(&self, model: &DiscreteWiretapModel, id: usize) -> Result<AuxiliaryPolicy> {
        build_policy(model, &self.config, self.rows, &self.grid, id)
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }
}

/// Every composition of `k` into `n` non-negative parts, lexicographic.
fn compositions(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=left).rev() {
            cur.push(first);
            rec(left - first, n - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, n, &mut Vec::with_capacity(n), &mut out);
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn dirichlet_row(rng: &mut ChaCha8Rng, alpha: f64, n: usize) -> Vec<f64> {
    let g = Gamma::new(alpha, 1.0).expect("positive concentration");
    let mut row: Vec<f64> = (0..n).map(|_| g.sample(rng)).collect();
    let total: f64 = row.iter().sum();
    if total > 0.0 && total.is_finite() {
        row.iter_mut().for_each(|v| *v /= total);
    } else {
        row.iter_mut().for_each(|v| *v = 0.0);
        row[rng.random_range(0..n)] = 1.0;
    }
    row
}

fn build_policy(
    model: &DiscreteWiretapModel,
    cfg: &SearchConfig,
    rows: usize,
    grid: &[Vec<usize>],
    id: usize,
) -> Result<AuxiliaryPolicy> {
    let c = model.cards();
    let width = cfg.u_card * c.x;
    let grid_total = if grid.is_empty() {
        0
    } else {
        grid.len().pow(rows as u32)
    };
    let row_values: Vec<Vec<f64>> = if id < grid_total {
        let k = cfg.grid_step.expect("grid configured") as f64;
        let mut rem = id;
        let mut out = vec![Vec::new(); rows];
        for r in (0..rows).rev() {
            out[r] = grid[rem % grid.len()]
                .iter()
                .map(|&n| n as f64 / k)
                .collect();
            rem /= grid.len();
        }
        out
    } else if id < grid_total + cfg.random_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(id as u64);
        let alpha = CONCENTRATIONS[id % CONCENTRATIONS.len()];
        (0..rows)
            .map(|_| dirichlet_row(&mut rng, alpha, width))
            .collect()
    } else {
        return Err(Error::usage(format!(
            "policy index {id} is outside the search"
        )));
    };
    let per_v1 = rows == c.v1 && cfg.mode == PolicyMode::MainStateOnly;
    AuxiliaryPolicy::from_fn(model, cfg.u_card, |v1, v2, u, x| {
        let r = if per_v1 { v1 } else { v1 * c.v2 + v2 };
        row_values[r][u * c.x + x]
    })
}

/// Evaluates every policy of the configured search (in parallel, with
/// results in index order).
pub fn search(model: &DiscreteWiretapModel, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let c = model.cards();
    if cfg.u_card == 0 {
        return Err(Error::usage("u_card must be at least 1"));
    }
    if cfg.u_card > model.u_card_bound() {
        return Err(Error::usage(format!(
            "u_card = {} exceeds the cardinality bound |X||V1||V2| + 4 = {}",
            cfg.u_card,
            model.u_card_bound()
        )));
    }
    let rows = match cfg.mode {
        PolicyMode::Full => c.v1 * c.v2,
        PolicyMode::MainStateOnly => c.v1,
    };
    let width = cfg.u_card * c.x;
    let grid = match cfg.grid_step {
        None => Vec::new(),
        Some(0) => return Err(Error::usage("grid step must be at least 1")),
        Some(k) => {
            let per_row = binomial((k + width - 1) as u128, (width - 1) as u128);
            let total = per_row.saturating_pow(rows as u32);
            if total > MAX_GRID_POLICIES as u128 {
                return Err(Error::CapExceeded {
                    what: "policy grid",
                    requested: total,
                    cap: MAX_GRID_POLICIES as u128,
                });
            }
            compositions(k, width)
        }
    };
    let grid_total = if grid.is_empty() {
        0
    } else {
        grid.len().pow(rows as u32)
    };
    let total = grid_total + cfg.random_samples;
    if total == 0 {
        return Err(Error::usage(
            "search budget is zero: no grid and no random samples",
        ));
    }
    let evaluations = (0..total)
        .into_par_iter()
        .map(|id| {
            let p = build_policy(model, cfg, rows, &grid, id)?;
            let profile = mi_profile(model, &p)?;
            Ok(PolicyEvaluation {
                id,
                profile,
                triplet: profile.triplet(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchOutcome {
        evaluations,
        config: cfg.clone(),
        rows,
        grid,
    })
}

/// Achievable (R, d) points of the searched policies.
pub fn achievable_points(
    model: &DiscreteWiretapModel,
    cfg: &SearchConfig,
) -> Result<RegionPointSet> {
    Ok(search(model, cfg)?.region())
}

/// Largest `max(r_u1, 0)` over the searched policies.
pub fn secrecy_rate(model: &DiscreteWiretapModel, cfg: &SearchConfig) -> Result<f64> {
    Ok(search(model, cfg)?.secrecy_rate().0)
}

/// `min{C_M, max (I(U;Y) - I(U;Z))}` with both maxima over the same
/// searched policies.
pub fn secrecy_upper_bound(model: &DiscreteWiretapModel, cfg: &SearchConfig) -> Result<f64> {
    Ok(search(model, cfg)?.upper_bound())
}

/// Gel'fand-Pinsker capacity estimate `max I(U;Y) - I(U;V1)` over policies
/// `p(u, x | v1)`; the configured mode is overridden.
pub fn main_channel_capacity(model: &DiscreteWiretapModel, cfg: &SearchConfig) -> Result<f64> {
    let cfg = cfg.clone().with_mode(PolicyMode::MainStateOnly);
    Ok(search(model, &cfg)?.main_channel_capacity().0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(8, 4).len(), 165);
        assert_eq!(binomial(11, 3), 165);
        assert!(compositions(3, 3)
            .iter()
            .all(|c| c.iter().sum::<usize>() == 3));
    }

    #[test]
    fn zero_budget_is_usage_error() {
        let m = DiscreteWiretapModel::stateless(
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            &[vec![0.5, 0.5], vec![0.5, 0.5]],
        )
        .unwrap();
        assert!(matches!(
            search(&m, &SearchConfig::random(2, 0, 1)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn policies_are_reproducible_by_index() {
        let m = DiscreteWiretapModel::stateless(
            &[vec![0.9, 0.1], vec![0.1, 0.9]],
            &[vec![0.7, 0.3], vec![0.3, 0.7]],
        )
        .unwrap();
        let cfg = SearchConfig::random(3, 20, 5).with_grid(2);
        let out = search(&m, &cfg).unwrap();
        for id in [0, 7, 20, 25] {
            let p = out.policy(&m, id).unwrap();
            assert_eq!(mi_profile(&m, &p).unwrap(), out.evaluations[id].profile);
        }
    }
}
