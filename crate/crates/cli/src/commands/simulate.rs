use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use wiretap_core::sim::{build_codebook, run_experiment, SimConfig};

use super::{absolute, in_file};
use crate::error::CliResult;
use crate::output::{json_text, OutputSet};
use crate::settings::{read_text, required, resolve};

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateArgs {
    /// Simulation JSON (model, policy, n, rate, epsilon, trials, seed).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Override the block length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Override the rate.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Override the typicality slack.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Override the number of trials.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Also write the codebook as `codebook.txt`.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub dump_codebook: Option<bool>,
    /// Override the seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn load_sim(path: &Path) -> CliResult<SimConfig> {
    SimConfig::from_json_str(&read_text(path)?).map_err(in_file(path))
}

pub fn run(flags: &SimulateArgs, config: Option<&Path>, out: &Path) -> CliResult<()> {
    let mut s = resolve(flags, config, "simulate")?;
    let input = absolute(&required(s.input.clone(), "input")?)?;
    s.input = Some(input.clone());
    let mut cfg = load_sim(&input)?;
    cfg.n = *s.n.get_or_insert(cfg.n);
    cfg.rate = *s.rate.get_or_insert(cfg.rate);
    cfg.epsilon = *s.epsilon.get_or_insert(cfg.epsilon);
    cfg.trials = *s.trials.get_or_insert(cfg.trials);
    cfg.seed = *s.seed.get_or_insert(cfg.seed);
    let dump = *s.dump_codebook.get_or_insert(false);
    cfg.validate()?;

    let report = run_experiment(&cfg)?;
    let mut set = OutputSet::create(out)?;
    set.write("report.json", &json_text(&report))?;
    if dump {
        set.write("codebook.txt", &build_codebook(&cfg)?.to_text())?;
    }
    set.finish("simulate", cfg.seed, &[&input], &s)
}
