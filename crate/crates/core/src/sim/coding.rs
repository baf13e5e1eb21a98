use rand::Rng;
use rand_distr::Distribution;

use super::codebook::Codebook;
use super::config::Laws;

/// Encoder output: chosen codeword, channel input and whether the encoder
/// fell back because no codeword in the bin was typical with the state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub codeword: usize,
    pub x: Vec<usize>,
    pub fallback: bool,
}

/// Legitimate decoder outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded {
    /// The 1-based bin of the unique typical codeword.
    Message(usize),
    /// No codeword is jointly typical with the output.
    NoCandidate,
    /// Two or more codewords are jointly typical with the output.
    Ambiguous,
}

/// Weak joint typicality: `|-(1/N) sum log2 p(a_i, b_i) - H| <= eps`, with
/// any zero-probability pair disqualifying. `log` is indexed
/// `[a * stride + b]`.
fn typical(a: &[u16], b: &[usize], log: &[f64], stride: usize, h: f64, eps: f64) -> bool {
    let mut acc = 0.0;
    for (&ai, &bi) in a.iter().zip(b) {
        let l = log[ai as usize * stride + bi];
        if l == f64::NEG_INFINITY {
            return false;
        }
        acc -= l;
    }
    (acc / a.len() as f64 - h).abs() <= eps
}

pub(crate) fn typical_uv1(laws: &Laws, u: &[u16], v1: &[usize], eps: f64) -> bool {
    typical(u, v1, &laws.log_uv1, laws.nv1, laws.h_uv1, eps)
}

pub(crate) fn typical_uy(laws: &Laws, u: &[u16], y: &[usize], eps: f64) -> bool {
    typical(u, y, &laws.log_uy, laws.ny, laws.h_uy, eps)
}

/// First codeword of bin `j` jointly typical with `v1`; otherwise the first
/// codeword of bin 1 with the fallback flag set. Deterministic.
pub(crate) fn select_with(
    cb: &Codebook,
    laws: &Laws,
    eps: f64,
    j: usize,
    v1: &[usize],
) -> (usize, bool) {
    cb.bin(j)
        .iter()
        .copied()
        .find(|&k| typical_uv1(laws, cb.codeword(k), v1, eps))
        .map_or((cb.bin(1)[0], true), |k| (k, false))
}

pub(crate) fn encode_with<R: Rng + ?Sized>(
    cb: &Codebook,
    laws: &Laws,
    eps: f64,
    j: usize,
    v1: &[usize],
    rng: &mut R,
) -> Encoded {
    let (codeword, fallback) = select_with(cb, laws, eps, j, v1);
    let x = cb
        .codeword(codeword)
        .iter()
        .zip(v1)
        .map(|(&u, &s)| laws.x_sampler[u as usize * laws.nv1 + s].sample(rng))
        .collect();
    Encoded {
        codeword,
        x,
        fallback,
    }
}

pub(crate) fn decode_with(cb: &Codebook, laws: &Laws, eps: f64, y: &[usize]) -> Decoded {
    let mut found = None;
    for k in 0..cb.len() {
        if typical_uy(laws, cb.codeword(k), y, eps) {
            if found.is_some() {
                return Decoded::Ambiguous;
            }
            found = Some(k);
        }
    }
    found.map_or(Decoded::NoCandidate, |k| Decoded::Message(cb.bin_of(k)))
}

/// Codeword the encoder picks for message `j` (1-based) under state `v1`,
/// and whether it had to fall back.
pub fn select_codeword(
    cb: &Codebook,
    cfg: &super::SimConfig,
    j: usize,
    v1: &[usize],
) -> (usize, bool) {
    select_with(cb, &Laws::new(cfg), cfg.epsilon, j, v1)
}

/// Encodes message `j` (1-based) under the main-channel state `v1`, drawing
/// `x_i ~ p(x | u_i, v1_i)`.
pub fn encode<R: Rng + ?Sized>(
    cb: &Codebook,
    cfg: &super::SimConfig,
    j: usize,
    v1: &[usize],
    rng: &mut R,
) -> Encoded {
    encode_with(cb, &Laws::new(cfg), cfg.epsilon, j, v1, rng)
}

/// Decodes `y` to the bin of the unique `(U,Y)`-typical codeword.
pub fn decode(cb: &Codebook, cfg: &super::SimConfig, y: &[usize]) -> Decoded {
    decode_with(cb, &Laws::new(cfg), cfg.epsilon, y)
}
