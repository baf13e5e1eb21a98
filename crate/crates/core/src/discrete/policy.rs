use serde::{Deserialize, Serialize};

use super::DiscreteWiretapModel;
use crate::prob::{names, Axis, TransitionKernel};
use crate::{Error, Result};

/// Conditional pmf `p(u, x | v1, v2)` over an auxiliary alphabet of size
/// `u_card`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryPolicy {
    u_card: usize,
    kernel: TransitionKernel,
}

/// On-disk layout: `table[v1][v2][u][x]`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyDoc {
    u_card: usize,
    table: Vec<Vec<Vec<Vec<f64>>>>,
}

impl AuxiliaryPolicy {
    /// `table` is row-major over `(v1, v2, u, x)`.
    pub fn new(v1: usize, v2: usize, u_card: usize, x: usize, table: Vec<f64>) -> Result<Self> {
        use names::*;
        let kernel = TransitionKernel::new(
            vec![Axis::new(V1, v1), Axis::new(V2, v2)],
            vec![Axis::new(U, u_card), Axis::new(X, x)],
            table,
        )
        .map_err(|e| match e {
            Error::Validation(m) => Error::Validation(format!("policy: {m}")),
            other => other,
        })?;
        Ok(AuxiliaryPolicy { u_card, kernel })
    }

    /// Builds a policy shaped for `model` from `f(v1, v2, u, x)`.
    pub fn from_fn(
        model: &DiscreteWiretapModel,
        u_card: usize,
        f: impl Fn(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let c = model.cards();
        let mut t = Vec::with_capacity(c.v1 * c.v2 * u_card * c.x);
        for v1 in 0..c.v1 {
            for v2 in 0..c.v2 {
                for u in 0..u_card {
                    for x in 0..c.x {
                        t.push(f(v1, v2, u, x));
                    }
                }
            }
        }
        Self::new(c.v1, c.v2, u_card, c.x, t)
    }

    /// Policy that ignores the wiretap state: `p(u, x | v1)` from
    /// `f(v1, u, x)`.
    pub fn from_main_state_fn(
        model: &DiscreteWiretapModel,
        u_card: usize,
        f: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        Self::from_fn(model, u_card, |v1, _, u, x| f(v1, u, x))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: PolicyDoc =
            serde_json::from_str(s).map_err(|e| Error::validation(format!("policy JSON: {e}")))?;
        let v1 = doc.table.len();
        let v2 = doc.table.first().map_or(0, Vec::len);
        let x = doc
            .table
            .first()
            .and_then(|r| r.first())
            .and_then(|r| r.first())
            .map_or(0, Vec::len);
        let mut flat = Vec::new();
        for a in &doc.table {
            if a.len() != v2 {
                return Err(Error::validation("policy table is ragged"));
            }
            for b in a {
                if b.len() != doc.u_card {
                    return Err(Error::validation(
                        "policy table u-dimension differs from u_card",
                    ));
                }
                for c in b {
                    if c.len() != x {
                        return Err(Error::validation("policy table is ragged"));
                    }
                    flat.extend_from_slice(c);
                }
            }
        }
        Self::new(v1, v2, doc.u_card, x, flat)
    }

    pub fn to_json_string(&self) -> String {
        let (nu, nx) = (self.u_card, self.x_card());
        let nv2 = self.kernel.inputs()[1].card;
        let table = self
            .kernel
            .table()
            .chunks(nv2 * nu * nx)
            .map(|a| {
                a.chunks(nu * nx)
                    .map(|b| b.chunks(nx).map(<[f64]>::to_vec).collect())
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&PolicyDoc { u_card: nu, table }).expect("policy serialises")
    }

    pub fn u_card(&self) -> usize {
        self.u_card
    }

    pub fn x_card(&self) -> usize {
        self.kernel.outputs()[1].card
    }

    pub fn kernel(&self) -> &TransitionKernel {
        &self.kernel
    }

    /// `p(u, x | v1, v2)`.
    pub fn prob(&self, v1: usize, v2: usize, u: usize, x: usize) -> f64 {
        let nv2 = self.kernel.inputs()[1].card;
        self.kernel.prob(v1 * nv2 + v2, u * self.x_card() + x)
    }

    /// Checks shape agreement with `model` and the cardinality bound on U.
    pub fn check_against(&self, model: &DiscreteWiretapModel) -> Result<()> {
        let c = model.cards();
        let ins = self.kernel.inputs();
        if ins[0].card != c.v1 || ins[1].card != c.v2 || self.x_card() != c.x {
            return Err(Error::usage(format!(
                "policy is shaped for |V1|={}, |V2|={}, |X|={} but the model has {}, {}, {}",
                ins[0].card,
                ins[1].card,
                self.x_card(),
                c.v1,
                c.v2,
                c.x
            )));
        }
        if self.u_card > model.u_card_bound() {
            return Err(Error::usage(format!(
                "|U| = {} exceeds the cardinality bound |X||V1||V2| + 4 = {}",
                self.u_card,
                model.u_card_bound()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> DiscreteWiretapModel {
        DiscreteWiretapModel::stateless(
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            &[vec![0.9, 0.1], vec![0.1, 0.9]],
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip() {
        let p = AuxiliaryPolicy::from_fn(&model(), 3, |_, _, u, x| {
            if u == 2 {
                0.0
            } else if u == x {
                0.5
            } else {
                0.0
            }
        })
        .unwrap();
        let again = AuxiliaryPolicy::from_json_str(&p.to_json_string()).unwrap();
        assert_eq!(p, again);
        assert_eq!(again.prob(0, 0, 1, 1), 0.5);
    }

    #[test]
    fn cardinality_bound_enforced() {
        let m = model();
        let ok = AuxiliaryPolicy::from_fn(&m, 6, |_, _, u, _| if u == 0 { 0.5 } else { 0.0 });
        assert!(ok.unwrap().check_against(&m).is_ok());
        let too_big = AuxiliaryPolicy::from_fn(&m, 7, |_, _, u, _| if u == 0 { 0.5 } else { 0.0 });
        assert!(matches!(
            too_big.unwrap().check_against(&m),
            Err(Error::Usage(_))
        ));
    }
}
