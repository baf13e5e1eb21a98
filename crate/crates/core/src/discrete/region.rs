use std::fmt::Write as _;

use super::PolicyEvaluation;
use crate::numeric::linspace;

/// Tolerance used when testing `R d <= r_u1` and `R <= r_u2`.
const CONTAINS_TOL: f64 = 1e-12;

/// One stored (R, d) point and the policy that produced it (`None` for the
/// origin).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub r: f64,
    pub d: f64,
    pub policy_id: Option<usize>,
}

/// Corner points of the achievable region of a policy search.
///
/// Each retained policy contributes the segment from `(r_u1, 1)` to
/// `(r_u2, d_u2)` along `R d = r_u1`; the region is the downward closure of
/// the union of these segments. Policies with negative `r_u1` or `r_u2` are
/// excluded, and policies dominated in both `r_u1` and `r_u2` by another one
/// add nothing and are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionPointSet {
    points: Vec<RegionPoint>,
    /// `(r_u1, r_u2, policy_id)` of the retained frontier policies.
    frontier: Vec<(f64, f64, usize)>,
}

impl RegionPointSet {
    pub(crate) fn from_evaluations(evals: &[PolicyEvaluation], curve_points: usize) -> Self {
        let mut cands: Vec<(f64, f64, usize)> = evals
            .iter()
            .filter(|e| e.triplet.r_u1 >= 0.0 && e.triplet.r_u2 >= 0.0)
            .map(|e| (e.triplet.r_u1, e.triplet.r_u2, e.id))
            .collect();
        // Sort by r_u2 descending, then r_u1 descending, then index.
        cands.sort_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then(b.0.total_cmp(&a.0))
                .then(a.2.cmp(&b.2))
        });
        let mut frontier = Vec::new();
        let mut best_r1 = f64::NEG_INFINITY;
        for c in cands {
            if c.0 > best_r1 {
                best_r1 = c.0;
                frontier.push(c);
            }
        }

        let mut points = vec![RegionPoint {
            r: 0.0,
            d: 1.0,
            policy_id: None,
        }];
        for &(r1, r2, id) in &frontier {
            let id = Some(id);
            if r2 <= 0.0 {
                continue;
            }
            if r1 == 0.0 {
                points.push(RegionPoint {
                    r: r2,
                    d: 0.0,
                    policy_id: id,
                });
                continue;
            }
            points.push(RegionPoint {
                r: r1,
                d: 1.0,
                policy_id: id,
            });
            if r2 > r1 {
                for r in linspace(r1, r2, curve_points.max(2)).into_iter().skip(1) {
                    let d = if r == r2 {
                        (r1 / r2).clamp(0.0, 1.0)
                    } else {
                        r1 / r
                    };
                    points.push(RegionPoint {
                        r,
                        d,
                        policy_id: id,
                    });
                }
            }
        }
        RegionPointSet { points, frontier }
    }

    pub fn points(&self) -> &[RegionPoint] {
        &self.points
    }

    /// Largest `r_u1` of the retained policies (0 when only the origin is
    /// stored).
    pub fn max_r_u1(&self) -> f64 {
        self.frontier.iter().map(|f| f.0).fold(0.0, f64::max)
    }

    /// Largest achievable rate at any equivocation.
    pub fn max_rate(&self) -> f64 {
        self.frontier.iter().map(|f| f.1).fold(0.0, f64::max)
    }

    /// Whether `(r, d)` lies in the downward-closed region.
    pub fn contains(&self, r: f64, d: f64) -> bool {
        if !(r >= 0.0 && (0.0..=1.0).contains(&d)) {
            return false;
        }
        if r == 0.0 {
            return true;
        }
        self.frontier
            .iter()
            .any(|&(r1, r2, _)| r <= r2 + CONTAINS_TOL && r * d <= r1 + CONTAINS_TOL)
    }

    /// CSV with header `R,d,policy_id`; the origin row has an empty id.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("R,d,policy_id\n");
        for p in &self.points {
            let id = p.policy_id.map(|i| i.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{},{},{}", p.r, p.d, id);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::{MiProfile, PolicyEvaluation};

    fn eval(id: usize, uy: f64, uv12: f64, uz: f64) -> PolicyEvaluation {
        let profile = MiProfile {
            uy,
            uv12,
            uz,
            uv1: uv12,
        };
        PolicyEvaluation {
            id,
            profile,
            triplet: profile.triplet(),
        }
    }

    #[test]
    fn segment_and_closure() {
        let set = RegionPointSet::from_evaluations(&[eval(0, 1.0, 0.0, 0.5)], 5);
        assert!(set.contains(0.5, 1.0));
        assert!(set.contains(1.0, 0.5));
        assert!(set.contains(0.75, 0.5 / 0.75));
        assert!(!set.contains(0.75, 0.7));
        assert!(!set.contains(1.01, 0.0));
        assert!(set.contains(0.0, 1.0));
        assert_eq!(set.points().len(), 1 + 1 + 4);
        assert!(set.to_csv().starts_with("R,d,policy_id\n0,1,\n0.5,1,0\n"));
    }

    #[test]
    fn dominated_policies_dropped() {
        let set = RegionPointSet::from_evaluations(
            &[
                eval(0, 0.5, 0.0, 0.3),
                eval(1, 1.0, 0.0, 0.5),
                eval(2, 0.2, 0.3, 0.0),
            ],
            3,
        );
        assert_eq!(set.frontier.len(), 1);
        assert_eq!(set.max_r_u1(), 0.5);
    }

    #[test]
    fn zero_secrecy_policy_gives_zero_equivocation_segment() {
        let set = RegionPointSet::from_evaluations(&[eval(0, 1.0, 0.0, 1.0)], 3);
        assert!(set.contains(1.0, 0.0));
        assert!(!set.contains(0.5, 0.01));
    }
}
