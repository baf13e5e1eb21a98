use super::{check_entries, check_table_size, Axis, MASS_TOLERANCE};
use crate::{Error, Result};

/// Conditional pmf `p(outputs | inputs)`.
///
/// The table is row-major over `inputs ++ outputs`, so each contiguous block
/// of `output_size()` entries is one conditional slice.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionKernel {
    inputs: Vec<Axis>,
    outputs: Vec<Axis>,
    table: Vec<f64>,
}

impl TransitionKernel {
    pub fn new(inputs: Vec<Axis>, outputs: Vec<Axis>, table: Vec<f64>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::validation("kernel needs at least one output axis"));
        }
        let all: Vec<&Axis> = inputs.iter().chain(outputs.iter()).collect();
        for (i, a) in all.iter().enumerate() {
            if all[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::validation(format!(
                    "duplicate axis name `{}`",
                    a.name
                )));
            }
        }
        let size = check_table_size(all.iter().map(|a| a.card))?;
        if size != table.len() {
            return Err(Error::validation(format!(
                "kernel table has {} entries but axes span {size}",
                table.len()
            )));
        }
        check_entries(&table, "kernel")?;
        let k = TransitionKernel {
            inputs,
            outputs,
            table,
        };
        for r in 0..k.input_size() {
            let mass: f64 = k.row(r).iter().sum();
            if (mass - 1.0).abs() > MASS_TOLERANCE {
                return Err(Error::validation(format!(
                    "kernel row {r} sums to {mass}, expected 1 within {MASS_TOLERANCE:e}"
                )));
            }
        }
        Ok(k)
    }

    /// Builds a kernel by evaluating `f(input_flat, output_flat)`.
    pub fn from_fn(
        inputs: Vec<Axis>,
        outputs: Vec<Axis>,
        f: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        let n_in: usize = inputs.iter().map(|a| a.card).product();
        let n_out: usize = outputs.iter().map(|a| a.card).product();
        check_table_size([n_in, n_out])?;
        let table = (0..n_in)
            .flat_map(|i| (0..n_out).map(move |o| (i, o)))
            .map(|(i, o)| f(i, o))
            .collect();
        Self::new(inputs, outputs, table)
    }

    pub fn inputs(&self) -> &[Axis] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Axis] {
        &self.outputs
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn input_size(&self) -> usize {
        self.inputs.iter().map(|a| a.card).product()
    }

    pub fn output_size(&self) -> usize {
        self.outputs.iter().map(|a| a.card).product()
    }

    /// Conditional slice for a flat input index.
    pub fn row(&self, input: usize) -> &[f64] {
        let w = self.output_size();
        &self.table[input * w..(input + 1) * w]
    }

    pub fn prob(&self, input: usize, output: usize) -> f64 {
        self.table[input * self.output_size() + output]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_must_be_stochastic() {
        let ok = TransitionKernel::new(
            vec![Axis::new("X", 2)],
            vec![Axis::new("Y", 2)],
            vec![0.9, 0.1, 0.2, 0.8],
        );
        assert!(ok.is_ok());
        let bad = TransitionKernel::new(
            vec![Axis::new("X", 2)],
            vec![Axis::new("Y", 2)],
            vec![0.9, 0.2, 0.2, 0.8],
        );
        assert!(matches!(bad, Err(Error::Validation(_))));
    }

    #[test]
    fn from_fn_layout() {
        let k =
            TransitionKernel::from_fn(vec![Axis::new("X", 2)], vec![Axis::new("Y", 3)], |x, y| {
                if x == 0 {
                    [0.5, 0.5, 0.0][y]
                } else {
                    [0.0, 0.0, 1.0][y]
                }
            })
            .unwrap();
        assert_eq!(k.row(1), &[0.0, 0.0, 1.0]);
        assert_eq!(k.prob(0, 1), 0.5);
    }
}
