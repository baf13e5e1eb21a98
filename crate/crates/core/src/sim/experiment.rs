use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::codebook::build_codebook;
use super::coding::{decode_with, Decoded};
use super::config::{Laws, SimConfig};
use super::posterior::PosteriorEngine;
use crate::discrete::{rate_triplet, RateTriplet};
use crate::prob::entropy_bits;
use crate::Result;

/// Summary of the per-trial normalised equivocation `H(J | z^N) / log2 M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivocationStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub std: f64,
}

/// Outcome of a Monte-Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    /// Empirical message error probability at the legitimate receiver.
    pub pe: f64,
    /// Wilson 95% half-width for `pe`.
    pub pe_ci95: f64,
    /// Normalised equivocation: mean posterior entropy over `log2 M`.
    pub d: f64,
    pub trials: usize,
    pub n: usize,
    pub m: usize,
    pub rate: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub codebook_size: usize,
    pub subbin_size: usize,
    pub theoretical: RateTriplet,
    pub equivocation: EquivocationStats,
    pub encoder_fallbacks: usize,
    pub decoder_no_candidate: usize,
    pub decoder_ambiguous: usize,
}

/// Wilson score 95% half-width for `successes / trials`.
pub(crate) fn wilson_half_width(p: f64, trials: usize) -> f64 {
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let z2 = Z * Z;
    Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
}

struct Trial {
    error: bool,
    fallback: bool,
    decoded: Decoded,
    equivocation: f64,
}

/// Runs `cfg.trials` independent transmissions. Trial `t` draws everything
/// from stream `t + 1` of the seeded generator, so the report depends only
/// on the configuration, not on the thread count.
pub fn run_experiment(cfg: &SimConfig) -> Result<SimulationReport> {
    let cb = build_codebook(cfg)?;
    let laws = Laws::new(cfg);
    let engine = PosteriorEngine::with_laws(&cb, &laws, cfg);
    let theoretical = rate_triplet(&cfg.model, &cfg.policy)?;
    let m = cb.bin_count();
    let log_m = (m as f64).log2();
    let n = cfg.n;

    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(t as u64 + 1);
            let j = rng.random_range(1..=m);
            let mut v1 = vec![0; n];
            let mut v2 = vec![0; n];
            for i in 0..n {
                let s = laws.state_sampler.sample(&mut rng);
                v1[i] = s / laws.nv2;
                v2[i] = s % laws.nv2;
            }
            let (k, fallback) = engine.choice(j, engine.sequence_index(&v1));
            let u = cb.codeword(k);
            let x: Vec<usize> = (0..n)
                .map(|i| laws.x_sampler[u[i] as usize * laws.nv1 + v1[i]].sample(&mut rng))
                .collect();
            let y: Vec<usize> = (0..n)
                .map(|i| laws.y_sampler[x[i] * laws.nv1 + v1[i]].sample(&mut rng))
                .collect();
            let z: Vec<usize> = (0..n)
                .map(|i| laws.z_sampler[x[i] * laws.nv2 + v2[i]].sample(&mut rng))
                .collect();
            let decoded = decode_with(&cb, &laws, cfg.epsilon, &y);
            let h = entropy_bits(&engine.posterior(&z)).clamp(0.0, log_m);
            Trial {
                error: decoded != Decoded::Message(j),
                fallback,
                decoded,
                equivocation: h / log_m,
            }
        })
        .collect();

    let count = trials.len() as f64;
    let errors = trials.iter().filter(|t| t.error).count();
    let pe = errors as f64 / count;
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for t in &trials {
        sum += t.equivocation;
        min = min.min(t.equivocation);
        max = max.max(t.equivocation);
    }
    let mean = sum / count;
    let var = trials
        .iter()
        .map(|t| (t.equivocation - mean).powi(2))
        .sum::<f64>()
        / count;
    Ok(SimulationReport {
        pe,
        pe_ci95: wilson_half_width(pe, trials.len()),
        d: mean,
        trials: trials.len(),
        n,
        m,
        rate: cfg.rate,
        epsilon: cfg.epsilon,
        seed: cfg.seed,
        codebook_size: cb.len(),
        subbin_size: cb.subbin_size(),
        theoretical,
        equivocation: EquivocationStats {
            mean,
            min,
            max,
            std: var.sqrt(),
        },
        encoder_fallbacks: trials.iter().filter(|t| t.fallback).count(),
        decoder_no_candidate: trials
            .iter()
            .filter(|t| t.decoded == Decoded::NoCandidate)
            .count(),
        decoder_ambiguous: trials
            .iter()
            .filter(|t| t.decoded == Decoded::Ambiguous)
            .count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_half_width_matches_reference_values() {
        // p = 0.5, n = 100: textbook Wilson interval [0.4038, 0.5962].
        assert!((wilson_half_width(0.5, 100) - 0.0962).abs() < 1e-3);
        // Degenerate p = 0 still has positive width.
        let h = wilson_half_width(0.0, 50);
        assert!(h > 0.0 && h < 0.08);
    }
}
