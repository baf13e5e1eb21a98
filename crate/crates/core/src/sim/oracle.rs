//! Brute-force reference posterior enumerating every state pair sequence
//! and channel input sequence. Exponential; only for tiny instances.

use super::codebook::Codebook;
use super::coding::select_with;
use super::config::{Laws, SimConfig};
use crate::{Error, Result};

/// Largest number of enumerated `(v1, v2, x)` sequence triples.
pub const MAX_ENUMERATION: u128 = 1 << 20;

/// Number of `(v1^N, v2^N, x^N)` triples the oracle would enumerate.
pub fn enumeration_size(cfg: &SimConfig) -> u128 {
    let c = cfg.model.cards();
    ((c.v1 * c.v2 * c.x) as u128).saturating_pow(cfg.n as u32)
}

/// `p(j | z^N)` by summing the full joint law of
/// `(v1^N, v2^N, x^N, z^N)` for every message.
pub fn brute_force_posterior(cb: &Codebook, cfg: &SimConfig, z: &[usize]) -> Result<Vec<f64>> {
    cfg.validate()?;
    let size = enumeration_size(cfg);
    if size > MAX_ENUMERATION {
        return Err(Error::CapExceeded {
            what: "brute-force enumeration",
            requested: size,
            cap: MAX_ENUMERATION,
        });
    }
    let laws = Laws::new(cfg);
    let m = &cfg.model;
    let n = cfg.n;
    let (nv1, nv2, nx) = (laws.nv1, laws.nv2, laws.nx);
    let radix = nv1 * nv2 * nx;
    let mut likelihood = vec![0.0; cb.bin_count()];
    let mut v1 = vec![0usize; n];
    let mut v2 = vec![0usize; n];
    let mut x = vec![0usize; n];
    for (jm1, slot) in likelihood.iter_mut().enumerate() {
        for t in 0..size as usize {
            let mut rest = t;
            for i in 0..n {
                let d = rest % radix;
                rest /= radix;
                x[i] = d % nx;
                v2[i] = (d / nx) % nv2;
                v1[i] = d / (nx * nv2);
            }
            let (k, _) = select_with(cb, &laws, cfg.epsilon, jm1 + 1, &v1);
            let u = cb.codeword(k);
            let mut p = 1.0;
            for i in 0..n {
                p *= m.p_state(v1[i], v2[i])
                    * laws.p_x(x[i], u[i] as usize, v1[i])
                    * m.p_wiretap(x[i], v2[i], z[i]);
            }
            *slot += p;
        }
    }
    let sum: f64 = likelihood.iter().sum();
    if sum <= 0.0 {
        return Err(Error::validation(
            "observation has zero probability under every message",
        ));
    }
    Ok(likelihood.into_iter().map(|l| l / sum).collect())
}
