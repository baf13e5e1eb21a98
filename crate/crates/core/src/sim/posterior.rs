use rayon::prelude::*;

use super::codebook::Codebook;
use super::coding::select_with;
use super::config::{Laws, SimConfig};
use crate::Result;

/// Precomputed state for exact eavesdropper posteriors `p(j | z^N)`.
///
/// Because the state and channel are memoryless given the codeword,
/// `p(z^N | j) = sum_{v1^N} prod_i w[z_i][u_i][v1_i]` where `u^N` is the
/// encoder's choice for `(j, v1^N)` and
/// `w[z][u][v1] = sum_v2 p(v1,v2) sum_x p(x|u,v1) p(z|x,v2)`.
#[derive(Debug, Clone)]
pub struct PosteriorEngine {
    n: usize,
    bins: usize,
    nu: usize,
    nv1: usize,
    sequences: usize,
    /// `v1^N` digits for every sequence index, mixed radix with the last
    /// coordinate fastest.
    digits: Vec<u8>,
    /// Encoder choice indexed `[(j - 1) * sequences + s]`.
    enc: Vec<u32>,
    /// Fallback flags aligned with `enc`.
    fallback: Vec<bool>,
    /// `w` indexed `[(z * nu + u) * nv1 + v1]`.
    w: Vec<f64>,
    codewords: Vec<Vec<u16>>,
}

impl PosteriorEngine {
    pub fn new(cb: &Codebook, cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let laws = Laws::new(cfg);
        Ok(Self::with_laws(cb, &laws, cfg))
    }

    pub(crate) fn with_laws(cb: &Codebook, laws: &Laws, cfg: &SimConfig) -> Self {
        let n = cb.n();
        let nv1 = laws.nv1;
        let sequences = nv1.pow(n as u32);
        let mut digits = vec![0u8; sequences * n];
        for s in 0..sequences {
            let mut rest = s;
            for i in (0..n).rev() {
                digits[s * n + i] = (rest % nv1) as u8;
                rest /= nv1;
            }
        }
        let bins = cb.bin_count();
        let eps = cfg.epsilon;
        let chosen: Vec<(u32, bool)> = (0..bins * sequences)
            .into_par_iter()
            .map(|idx| {
                let j = idx / sequences + 1;
                let s = idx % sequences;
                let v1: Vec<usize> = digits[s * n..(s + 1) * n]
                    .iter()
                    .map(|&d| d as usize)
                    .collect();
                let (k, fb) = select_with(cb, laws, eps, j, &v1);
                (k as u32, fb)
            })
            .collect();
        let (enc, fallback) = chosen.into_iter().unzip();

        // Wiretap rows that do not depend on x make the inner sum over x
        // collapse to the row itself; using it directly keeps w bitwise
        // independent of u so that a blind eavesdropper yields an exactly
        // uniform posterior.
        let m = &cfg.model;
        let (nu, nx, nv2, nz) = (laws.nu, laws.nx, laws.nv2, laws.nz);
        let blind: Vec<bool> = (0..nv2)
            .map(|v2| {
                (1..nx).all(|x| (0..nz).all(|z| m.p_wiretap(x, v2, z) == m.p_wiretap(0, v2, z)))
            })
            .collect();
        let mut w = vec![0.0; nz * nu * nv1];
        for z in 0..nz {
            for u in 0..nu {
                for v1 in 0..nv1 {
                    let mut acc = 0.0;
                    for (v2, &is_blind) in blind.iter().enumerate() {
                        let inner = if is_blind {
                            m.p_wiretap(0, v2, z)
                        } else {
                            (0..nx)
                                .map(|x| laws.p_x(x, u, v1) * m.p_wiretap(x, v2, z))
                                .sum()
                        };
                        acc += m.p_state(v1, v2) * inner;
                    }
                    w[(z * nu + u) * nv1 + v1] = acc;
                }
            }
        }
        PosteriorEngine {
            n,
            bins,
            nu,
            nv1,
            sequences,
            digits,
            enc,
            fallback,
            w,
            codewords: (0..cb.len()).map(|k| cb.codeword(k).to_vec()).collect(),
        }
    }

    /// Index of `v1^N` in the enumeration order.
    pub(crate) fn sequence_index(&self, v1: &[usize]) -> usize {
        v1.iter().fold(0, |acc, &d| acc * self.nv1 + d)
    }

    /// Encoder choice for message `j` (1-based) and sequence index `s`.
    pub(crate) fn choice(&self, j: usize, s: usize) -> (usize, bool) {
        let idx = (j - 1) * self.sequences + s;
        (self.enc[idx] as usize, self.fallback[idx])
    }

    /// Posterior over the `M` messages given `z^N`, as a vector indexed by
    /// `j - 1`.
    pub fn posterior(&self, z: &[usize]) -> Vec<f64> {
        let n = self.n;
        let likelihood: Vec<f64> = (1..=self.bins)
            .map(|j| {
                let mut total = 0.0;
                for s in 0..self.sequences {
                    let u = &self.codewords[self.enc[(j - 1) * self.sequences + s] as usize];
                    let v1 = &self.digits[s * n..(s + 1) * n];
                    let mut prod = 1.0;
                    for i in 0..n {
                        prod *=
                            self.w[(z[i] * self.nu + u[i] as usize) * self.nv1 + v1[i] as usize];
                    }
                    total += prod;
                }
                total
            })
            .collect();
        let first = likelihood[0];
        if likelihood.iter().all(|&l| l == first) {
            return vec![1.0 / self.bins as f64; self.bins];
        }
        let sum: f64 = likelihood.iter().sum();
        likelihood.into_iter().map(|l| l / sum).collect()
    }
}

/// Exact eavesdropper posterior `p(j | z^N)` for one observation.
pub fn eavesdropper_posterior(cb: &Codebook, cfg: &SimConfig, z: &[usize]) -> Result<Vec<f64>> {
    Ok(PosteriorEngine::new(cb, cfg)?.posterior(z))
}
