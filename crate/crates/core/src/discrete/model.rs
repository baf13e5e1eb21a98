use serde::{Deserialize, Serialize};

use crate::prob::{names, Axis, JointPmf, TransitionKernel};
use crate::{Error, Result};

/// Alphabet sizes of the channel input, both outputs and both states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cards {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub v1: usize,
    pub v2: usize,
}

/// State pmf `p(v1,v2)` plus the kernels `p(y|x,v1)` and `p(z|x,v2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteWiretapModel {
    cards: Cards,
    state: JointPmf,
    main: TransitionKernel,
    wiretap: TransitionKernel,
}

/// On-disk layout. Nesting is row-major: `state_pmf[v1][v2]`,
/// `main_kernel[x][v1][y]`, `wiretap_kernel[x][v2][z]`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    cards: Cards,
    state_pmf: Vec<Vec<f64>>,
    main_kernel: Vec<Vec<Vec<f64>>>,
    wiretap_kernel: Vec<Vec<Vec<f64>>>,
}

fn flatten2(field: &str, v: &[Vec<f64>], shape: [usize; 2]) -> Result<Vec<f64>> {
    if v.len() != shape[0] || v.iter().any(|r| r.len() != shape[1]) {
        return Err(Error::validation(format!(
            "{field} must have shape {}x{}",
            shape[0], shape[1]
        )));
    }
    Ok(v.concat())
}

fn flatten3(field: &str, v: &[Vec<Vec<f64>>], shape: [usize; 3]) -> Result<Vec<f64>> {
    if v.len() != shape[0] {
        return Err(Error::validation(format!(
            "{field} must have shape {}x{}x{}",
            shape[0], shape[1], shape[2]
        )));
    }
    let mut out = Vec::with_capacity(shape.iter().product());
    for block in v {
        out.extend(flatten2(field, block, [shape[1], shape[2]]).map_err(|_| {
            Error::validation(format!(
                "{field} must have shape {}x{}x{}",
                shape[0], shape[1], shape[2]
            ))
        })?);
    }
    Ok(out)
}

fn unflatten3(t: &[f64], shape: [usize; 3]) -> Vec<Vec<Vec<f64>>> {
    t.chunks(shape[1] * shape[2])
        .map(|b| b.chunks(shape[2]).map(<[f64]>::to_vec).collect())
        .collect()
}

fn renamed(e: Error, what: &str) -> Error {
    match e {
        Error::Validation(m) => Error::Validation(format!("{what}: {m}")),
        other => other,
    }
}

impl DiscreteWiretapModel {
    /// Builds a model from flat row-major tables (same nesting as the JSON
    /// layout).
    pub fn new(cards: Cards, state: Vec<f64>, main: Vec<f64>, wiretap: Vec<f64>) -> Result<Self> {
        use names::*;
        let state = JointPmf::new(
            vec![Axis::new(V1, cards.v1), Axis::new(V2, cards.v2)],
            state,
        )
        .map_err(|e| renamed(e, "state_pmf"))?;
        let main = TransitionKernel::new(
            vec![Axis::new(X, cards.x), Axis::new(V1, cards.v1)],
            vec![Axis::new(Y, cards.y)],
            main,
        )
        .map_err(|e| renamed(e, "main_kernel"))?;
        let wiretap = TransitionKernel::new(
            vec![Axis::new(X, cards.x), Axis::new(V2, cards.v2)],
            vec![Axis::new(Z, cards.z)],
            wiretap,
        )
        .map_err(|e| renamed(e, "wiretap_kernel"))?;
        Ok(DiscreteWiretapModel {
            cards,
            state,
            main,
            wiretap,
        })
    }

    /// Builds a model from closures `main(x, v1, y)` and `wiretap(x, v2, z)`.
    pub fn from_fns(
        cards: Cards,
        state: Vec<f64>,
        main: impl Fn(usize, usize, usize) -> f64,
        wiretap: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut m = Vec::with_capacity(cards.x * cards.v1 * cards.y);
        for x in 0..cards.x {
            for v1 in 0..cards.v1 {
                for y in 0..cards.y {
                    m.push(main(x, v1, y));
                }
            }
        }
        let mut w = Vec::with_capacity(cards.x * cards.v2 * cards.z);
        for x in 0..cards.x {
            for v2 in 0..cards.v2 {
                for z in 0..cards.z {
                    w.push(wiretap(x, v2, z));
                }
            }
        }
        Self::new(cards, state, m, w)
    }

    /// A model without states: `main[x][y]`, `wiretap[x][z]`.
    pub fn stateless(main: &[Vec<f64>], wiretap: &[Vec<f64>]) -> Result<Self> {
        let x = main.len();
        if wiretap.len() != x || x == 0 {
            return Err(Error::usage(
                "main and wiretap kernels need the same input alphabet",
            ));
        }
        let cards = Cards {
            x,
            y: main[0].len(),
            z: wiretap[0].len(),
            v1: 1,
            v2: 1,
        };
        Self::new(
            cards,
            vec![1.0],
            flatten2("main_kernel", main, [x, cards.y])?,
            flatten2("wiretap_kernel", wiretap, [x, cards.z])?,
        )
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: ModelDoc =
            serde_json::from_str(s).map_err(|e| Error::validation(format!("model JSON: {e}")))?;
        let c = doc.cards;
        let state = flatten2("state_pmf", &doc.state_pmf, [c.v1, c.v2])?;
        let main = flatten3("main_kernel", &doc.main_kernel, [c.x, c.v1, c.y])?;
        let wire = flatten3("wiretap_kernel", &doc.wiretap_kernel, [c.x, c.v2, c.z])?;
        Self::new(c, state, main, wire)
    }

    pub fn to_json_string(&self) -> String {
        let c = self.cards;
        let doc = ModelDoc {
            cards: c,
            state_pmf: self
                .state
                .table()
                .chunks(c.v2)
                .map(<[f64]>::to_vec)
                .collect(),
            main_kernel: unflatten3(self.main.table(), [c.x, c.v1, c.y]),
            wiretap_kernel: unflatten3(self.wiretap.table(), [c.x, c.v2, c.z]),
        };
        serde_json::to_string_pretty(&doc).expect("model serialises")
    }

    pub fn cards(&self) -> Cards {
        self.cards
    }

    pub fn state(&self) -> &JointPmf {
        &self.state
    }

    pub fn main(&self) -> &TransitionKernel {
        &self.main
    }

    pub fn wiretap(&self) -> &TransitionKernel {
        &self.wiretap
    }

    /// `p(v1, v2)`.
    pub fn p_state(&self, v1: usize, v2: usize) -> f64 {
        self.state.table()[v1 * self.cards.v2 + v2]
    }

    /// `p(y | x, v1)`.
    pub fn p_main(&self, x: usize, v1: usize, y: usize) -> f64 {
        self.main.prob(x * self.cards.v1 + v1, y)
    }

    /// `p(z | x, v2)`.
    pub fn p_wiretap(&self, x: usize, v2: usize, z: usize) -> f64 {
        self.wiretap.prob(x * self.cards.v2 + v2, z)
    }

    /// Largest auxiliary alphabet allowed by the cardinality bound.
    pub fn u_card_bound(&self) -> usize {
        self.cards.x * self.cards.v1 * self.cards.v2 + 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BSC_JSON: &str = r#"{
        "cards": {"x": 2, "y": 2, "z": 2, "v1": 1, "v2": 1},
        "state_pmf": [[1.0]],
        "main_kernel": [[[0.95, 0.05]], [[0.05, 0.95]]],
        "wiretap_kernel": [[[0.8, 0.2]], [[0.2, 0.8]]]
    }"#;

    #[test]
    fn json_round_trip() {
        let m = DiscreteWiretapModel::from_json_str(BSC_JSON).unwrap();
        assert_eq!(m.p_main(1, 0, 0), 0.05);
        assert_eq!(m.p_wiretap(0, 0, 1), 0.2);
        let again = DiscreteWiretapModel::from_json_str(&m.to_json_string()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn shape_and_row_errors_are_named() {
        let bad = BSC_JSON.replace("[[0.8, 0.2]], [[0.2, 0.8]]", "[[0.8, 0.3]], [[0.2, 0.8]]");
        let err = DiscreteWiretapModel::from_json_str(&bad).unwrap_err();
        assert!(err.to_string().contains("wiretap_kernel"), "{err}");
        let short = BSC_JSON.replace("[[[0.95, 0.05]], [[0.05, 0.95]]]", "[[[0.95, 0.05]]]");
        let err = DiscreteWiretapModel::from_json_str(&short).unwrap_err();
        assert!(err.to_string().contains("main_kernel"), "{err}");
    }

    #[test]
    fn stateless_constructor_matches_json() {
        let m = DiscreteWiretapModel::stateless(
            &[vec![0.95, 0.05], vec![0.05, 0.95]],
            &[vec![0.8, 0.2], vec![0.2, 0.8]],
        )
        .unwrap();
        assert_eq!(m, DiscreteWiretapModel::from_json_str(BSC_JSON).unwrap());
        assert_eq!(m.u_card_bound(), 6);
    }
}
