use serde::{Deserialize, Serialize};

use super::{AuxiliaryPolicy, DiscreteWiretapModel};
use crate::prob::{clamp_mi, entropy_bits};
use crate::Result;

/// Rates of the two corner points generated by one auxiliary policy.
///
/// `r_u1 = I(U;Y) - max{I(U;V1,V2), I(U;Z)}`, `r_u2 = I(U;Y) - I(U;V1,V2)`
/// and `d_u2 = r_u1 / r_u2` clamped to `[0, 1]`. A negative `r_u1` is
/// reported as is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateTriplet {
    pub r_u1: f64,
    pub r_u2: f64,
    pub d_u2: f64,
    pub mi_uy: f64,
    pub mi_uv: f64,
    pub mi_uz: f64,
}

/// The four mutual informations that every policy-level quantity is built
/// from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiProfile {
    pub uy: f64,
    pub uv12: f64,
    pub uz: f64,
    pub uv1: f64,
}

impl MiProfile {
    pub fn triplet(&self) -> RateTriplet {
        let r_u1 = self.uy - self.uv12.max(self.uz);
        let r_u2 = self.uy - self.uv12;
        let d_u2 = if r_u1 == r_u2 {
            1.0
        } else if r_u2 > 1e-12 {
            (r_u1 / r_u2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        RateTriplet {
            r_u1,
            r_u2,
            d_u2,
            mi_uy: self.uy,
            mi_uv: self.uv12,
            mi_uz: self.uz,
        }
    }

    /// `I(U;Y) - I(U;V1)`, the main-channel binning rate.
    pub fn gp_rate(&self) -> f64 {
        self.uy - self.uv1
    }

    /// `I(U;Y) - I(U;Z)`.
    pub fn wiretap_gap(&self) -> f64 {
        self.uy - self.uz
    }
}

/// `I(U;A)` from a dense `p(u, a)` table with `na` columns.
fn mi_from_pair_table(t: &[f64], nu: usize, na: usize) -> f64 {
    let mut pu = vec![0.0; nu];
    let mut pa = vec![0.0; na];
    for u in 0..nu {
        for a in 0..na {
            let v = t[u * na + a];
            pu[u] += v;
            pa[a] += v;
        }
    }
    clamp_mi(entropy_bits(&pu) + entropy_bits(&pa) - entropy_bits(t))
}

/// Computes `I(U;Y)`, `I(U;V1,V2)`, `I(U;Z)` and `I(U;V1)` directly from
/// the pairwise marginals of the composed law, without materialising the
/// full six-axis table.
pub fn mi_profile(model: &DiscreteWiretapModel, policy: &AuxiliaryPolicy) -> Result<MiProfile> {
    policy.check_against(model)?;
    let c = model.cards();
    let nu = policy.u_card();
    let mut p_uv = vec![0.0; nu * c.v1 * c.v2];
    let mut p_uy = vec![0.0; nu * c.y];
    let mut p_uz = vec![0.0; nu * c.z];
    for u in 0..nu {
        for x in 0..c.x {
            for v1 in 0..c.v1 {
                for v2 in 0..c.v2 {
                    let w = model.p_state(v1, v2) * policy.prob(v1, v2, u, x);
                    if w == 0.0 {
                        continue;
                    }
                    p_uv[(u * c.v1 + v1) * c.v2 + v2] += w;
                    for y in 0..c.y {
                        p_uy[u * c.y + y] += w * model.p_main(x, v1, y);
                    }
                    for z in 0..c.z {
                        p_uz[u * c.z + z] += w * model.p_wiretap(x, v2, z);
                    }
                }
            }
        }
    }
    let mut p_uv1 = vec![0.0; nu * c.v1];
    for u in 0..nu {
        for v1 in 0..c.v1 {
            p_uv1[u * c.v1 + v1] = p_uv[(u * c.v1 + v1) * c.v2..(u * c.v1 + v1 + 1) * c.v2]
                .iter()
                .sum();
        }
    }
    Ok(MiProfile {
        uy: mi_from_pair_table(&p_uy, nu, c.y),
        uv12: mi_from_pair_table(&p_uv, nu, c.v1 * c.v2),
        uz: mi_from_pair_table(&p_uz, nu, c.z),
        uv1: mi_from_pair_table(&p_uv1, nu, c.v1),
    })
}

/// Rate triplet of one auxiliary policy.
pub fn rate_triplet(model: &DiscreteWiretapModel, policy: &AuxiliaryPolicy) -> Result<RateTriplet> {
    Ok(mi_profile(model, policy)?.triplet())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::Cards;
    use crate::prob::{compose, mutual_information};
    use crate::Error;

    fn bsc(e: f64) -> Vec<Vec<f64>> {
        vec![vec![1.0 - e, e], vec![e, 1.0 - e]]
    }

    fn copy_policy(m: &DiscreteWiretapModel) -> AuxiliaryPolicy {
        AuxiliaryPolicy::from_fn(m, 2, |_, _, u, x| if u == x { 0.5 } else { 0.0 }).unwrap()
    }

    #[test]
    fn noiseless_main_bsc_wiretap() {
        let m = DiscreteWiretapModel::stateless(&bsc(0.0), &bsc(0.1)).unwrap();
        let t = rate_triplet(&m, &copy_policy(&m)).unwrap();
        assert!((t.r_u1 - 0.468_995_593_589_281_2).abs() < 1e-12);
        assert!((t.r_u2 - 1.0).abs() < 1e-12);
        assert!((t.d_u2 - 0.468_995_593_589_281_2).abs() < 1e-12);
    }

    #[test]
    fn useless_eavesdropper_gives_unit_equivocation() {
        let m =
            DiscreteWiretapModel::stateless(&bsc(0.1), &[vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap();
        let t = rate_triplet(&m, &copy_policy(&m)).unwrap();
        assert_eq!(t.mi_uz, 0.0);
        assert_eq!(t.r_u1, t.r_u2);
        assert_eq!(t.d_u2, 1.0);
    }

    #[test]
    fn constant_auxiliary_is_all_zero() {
        let m = DiscreteWiretapModel::stateless(&bsc(0.1), &bsc(0.2)).unwrap();
        let p = AuxiliaryPolicy::from_fn(&m, 1, |_, _, _, _| 0.5).unwrap();
        let t = rate_triplet(&m, &p).unwrap();
        assert_eq!((t.r_u1, t.r_u2, t.d_u2), (0.0, 0.0, 1.0));
    }

    #[test]
    fn bound_violation_is_usage_error() {
        let m = DiscreteWiretapModel::stateless(&bsc(0.1), &bsc(0.2)).unwrap();
        let p =
            AuxiliaryPolicy::from_fn(&m, 7, |_, _, u, _| if u == 0 { 0.5 } else { 0.0 }).unwrap();
        assert!(matches!(rate_triplet(&m, &p), Err(Error::Usage(_))));
    }

    #[test]
    fn profile_matches_composed_joint() {
        let cards = Cards {
            x: 2,
            y: 3,
            z: 2,
            v1: 2,
            v2: 2,
        };
        let m = DiscreteWiretapModel::from_fns(
            cards,
            vec![0.4, 0.1, 0.2, 0.3],
            |x, v1, y| [[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]][(x + v1) % 2][y],
            |x, v2, z| [[0.8, 0.2], [0.35, 0.65]][x ^ v2][z],
        )
        .unwrap();
        let p = AuxiliaryPolicy::from_fn(&m, 3, |v1, v2, u, x| {
            let w = [[0.1, 0.2], [0.3, 0.05], [0.15, 0.2]][u][x] + 0.05 * (v1 * 2 + v2) as f64;
            w / (1.0 + 0.3 * (v1 * 2 + v2) as f64)
        })
        .unwrap();
        let prof = mi_profile(&m, &p).unwrap();
        let j = compose(m.state(), p.kernel(), m.main(), m.wiretap()).unwrap();
        let mi = |b: &[&str]| mutual_information(&j, &["U"], b).unwrap();
        assert!((prof.uy - mi(&["Y"])).abs() < 1e-12);
        assert!((prof.uv12 - mi(&["V1", "V2"])).abs() < 1e-12);
        assert!((prof.uz - mi(&["Z"])).abs() < 1e-12);
        assert!((prof.uv1 - mi(&["V1"])).abs() < 1e-12);
    }
}
