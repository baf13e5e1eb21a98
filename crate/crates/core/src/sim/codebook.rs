use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::Distribution;

use super::config::{Laws, SimConfig, MAX_CODEBOOK, MAX_ENCODER_TABLE};
use crate::discrete::mi_profile;
use crate::{Error, Result};

/// Random codebook partitioned round-robin into `M` bins, each bin cut into
/// consecutive subbins. Bin and subbin labels are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    n: usize,
    seed: u64,
    rate: f64,
    epsilon: f64,
    mi_uy: f64,
    mi_uz: f64,
    subbin_size: usize,
    codewords: Vec<Vec<u16>>,
    /// Codeword indices of each bin, in scan order. `bins[j - 1]` is bin `j`.
    bins: Vec<Vec<usize>>,
    bin_of: Vec<usize>,
    subbin_of: Vec<usize>,
}

/// `ceil(2^exponent)`, tolerant of exponents that land a hair above an
/// integer.
fn ceil_pow2(exponent: f64) -> f64 {
    (exponent.exp2() - 1e-9).ceil()
}

/// Draws the codebook for `cfg`: `ceil(2^{N(I(U;Y) - eps)})` i.i.d. `p(u)`
/// codewords from stream 0 of the seeded generator, shuffled, then dealt
/// round-robin into bins.
pub fn build_codebook(cfg: &SimConfig) -> Result<Codebook> {
    cfg.validate()?;
    let profile = mi_profile(&cfg.model, &cfg.policy)?;
    let laws = Laws::new(cfg);
    let n = cfg.n;
    let exponent = n as f64 * (profile.uy - cfg.epsilon);
    if exponent <= 0.0 {
        return Err(Error::InfeasibleRate(format!(
            "I(U;Y) = {} does not exceed epsilon = {}",
            profile.uy, cfg.epsilon
        )));
    }
    let size = ceil_pow2(exponent);
    if size > MAX_CODEBOOK as f64 {
        return Err(Error::CapExceeded {
            what: "codebook size",
            requested: size as u128,
            cap: MAX_CODEBOOK,
        });
    }
    let size = size as usize;
    let m = cfg.message_count();
    if size < m {
        return Err(Error::InfeasibleRate(format!(
            "codebook of {size} codewords cannot hold {m} bins (rate {} exceeds I(U;Y) - epsilon)",
            cfg.rate
        )));
    }
    let table = size as u128 * (laws.nv1 as u128).pow(n as u32);
    if table > MAX_ENCODER_TABLE {
        return Err(Error::CapExceeded {
            what: "encoder table (codebook x |V1|^N)",
            requested: table,
            cap: MAX_ENCODER_TABLE,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let dist = WeightedIndex::new(laws.p_u.iter().copied())
        .map_err(|e| Error::validation(format!("p(u): {e}")))?;
    let mut codewords: Vec<Vec<u16>> = (0..size)
        .map(|_| (0..n).map(|_| dist.sample(&mut rng) as u16).collect())
        .collect();
    codewords.shuffle(&mut rng);

    let subbin_size = if profile.uz - cfg.epsilon > 0.0 {
        (ceil_pow2(n as f64 * (profile.uz - cfg.epsilon)) as usize).max(1)
    } else {
        1
    };
    let mut bins = vec![Vec::new(); m];
    let mut bin_of = vec![0; size];
    let mut subbin_of = vec![0; size];
    for k in 0..size {
        let b = k % m;
        subbin_of[k] = bins[b].len() / subbin_size + 1;
        bins[b].push(k);
        bin_of[k] = b + 1;
    }
    Ok(Codebook {
        n,
        seed: cfg.seed,
        rate: cfg.rate,
        epsilon: cfg.epsilon,
        mi_uy: profile.uy,
        mi_uz: profile.uz,
        subbin_size,
        codewords,
        bins,
        bin_of,
        subbin_of,
    })
}

impl Codebook {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Number of bins (= messages).
    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }

    pub fn subbin_size(&self) -> usize {
        self.subbin_size
    }

    pub fn codeword(&self, k: usize) -> &[u16] {
        &self.codewords[k]
    }

    /// Codeword indices of bin `j` (1-based) in scan order.
    pub fn bin(&self, j: usize) -> &[usize] {
        &self.bins[j - 1]
    }

    /// 1-based bin label of codeword `k`.
    pub fn bin_of(&self, k: usize) -> usize {
        self.bin_of[k]
    }

    /// 1-based subbin label of codeword `k` within its bin.
    pub fn subbin_of(&self, k: usize) -> usize {
        self.subbin_of[k]
    }

    /// Deterministic text dump: a `#` header with seed, rates and sizes, then
    /// one codeword per line as `bin subbin s_1 ... s_N`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# seed={} n={} rate={} epsilon={} mi_uy={} mi_uz={} codewords={} bins={} subbin_size={}",
            self.seed,
            self.n,
            self.rate,
            self.epsilon,
            self.mi_uy,
            self.mi_uz,
            self.len(),
            self.bin_count(),
            self.subbin_size
        );
        let _ = writeln!(out, "# columns: bin subbin symbols...");
        for (k, cw) in self.codewords.iter().enumerate() {
            let _ = write!(out, "{} {}", self.bin_of[k], self.subbin_of[k]);
            for s in cw {
                let _ = write!(out, " {s}");
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::ceil_pow2;

    #[test]
    fn ceil_pow2_absorbs_float_noise() {
        assert_eq!(ceil_pow2(3.0), 8.0);
        assert_eq!(ceil_pow2(3.0 + 1e-15), 8.0);
        assert_eq!(ceil_pow2(3.0 - 1e-15), 8.0);
        assert_eq!(ceil_pow2(3.1), 9.0);
        assert_eq!(ceil_pow2(0.5), 2.0);
    }
}
