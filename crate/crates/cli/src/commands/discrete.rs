use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use wiretap_core::discrete::{
    search, DiscreteWiretapModel, PolicyMode, SearchConfig, SearchOutcome,
};

use super::{absolute, in_file};
use crate::error::CliResult;
use crate::output::{json_text, OutputSet};
use crate::settings::{read_text, required, resolve};

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteRegionArgs {
    /// Channel model JSON.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Auxiliary alphabet size (default: |X||V1||V2| + 4).
    #[arg(long)]
    pub u_card: Option<usize>,
    /// Number of random Dirichlet policies.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Also enumerate every policy on the simplex grid of step 1/k.
    #[arg(long)]
    pub grid_step: Option<usize>,
    /// Policy family: `full` (depends on both states) or `main_state_only`.
    #[arg(long, value_parser = ["full", "main_state_only"])]
    pub mode: Option<String>,
    /// Samples of the R d = R_U1 curve per frontier policy.
    #[arg(long)]
    pub curve_points: Option<usize>,
    /// Seed for the random policy draws.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub const DEFAULT_SAMPLES: usize = 20_000;

pub fn load_model(path: &Path) -> CliResult<DiscreteWiretapModel> {
    DiscreteWiretapModel::from_json_str(&read_text(path)?).map_err(in_file(path))
}

fn best(
    outcome: &SearchOutcome,
    model: &DiscreteWiretapModel,
    id: Option<usize>,
) -> CliResult<Value> {
    let Some(id) = id else { return Ok(Value::Null) };
    let policy = outcome.policy(model, id)?;
    let eval = outcome
        .evaluations
        .iter()
        .find(|e| e.id == id)
        .expect("evaluated policy");
    Ok(json!({
        "id": id,
        "triplet": eval.triplet,
        "policy": serde_json::from_str::<Value>(&policy.to_json_string()).expect("policy JSON"),
    }))
}

pub fn run(flags: &DiscreteRegionArgs, config: Option<&Path>, out: &Path) -> CliResult<()> {
    let mut s = resolve(flags, config, "discrete-region")?;
    let model_path = absolute(&required(s.model.clone(), "model")?)?;
    let model = load_model(&model_path)?;
    s.model = Some(model_path.clone());
    let seed = *s.seed.get_or_insert(0);
    let u_card = *s.u_card.get_or_insert(model.u_card_bound());
    let samples = *s.samples.get_or_insert(DEFAULT_SAMPLES);
    let curve_points = *s.curve_points.get_or_insert(16);
    let mode = match s.mode.get_or_insert_with(|| "full".into()).as_str() {
        "main_state_only" => PolicyMode::MainStateOnly,
        _ => PolicyMode::Full,
    };
    let cfg = SearchConfig {
        u_card,
        random_samples: samples,
        grid_step: s.grid_step,
        seed,
        mode,
        curve_points,
    };
    let outcome = search(&model, &cfg)?;
    let (secrecy, secrecy_id) = outcome.secrecy_rate();
    let (c_m, c_m_id) = outcome.main_channel_capacity();
    let (gap, _) = outcome.wiretap_gap();
    let summary = json!({
        "secrecy_rate": secrecy,
        "upper_bound": outcome.upper_bound(),
        "C_M": c_m,
        "wiretap_gap": gap,
        "policies_evaluated": outcome.evaluations.len(),
        "u_card": u_card,
        "best_policies": {
            "secrecy_rate": best(&outcome, &model, secrecy_id)?,
            "C_M": best(&outcome, &model, c_m_id)?,
        },
    });

    let mut set = OutputSet::create(out)?;
    set.write("region.csv", &outcome.region().to_csv())?;
    set.write("summary.json", &json_text(&summary))?;
    set.finish("discrete-region", seed, &[&model_path], &s)
}
