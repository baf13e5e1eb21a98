use super::{check_entries, check_mass, check_table_size, entropy_bits};
use crate::{Error, Result};

/// A named finite axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub name: String,
    pub card: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, card: usize) -> Self {
        Axis {
            name: name.into(),
            card,
        }
    }
}

/// Dense joint probability table over an ordered list of named axes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    axes: Vec<Axis>,
    table: Vec<f64>,
}

impl JointPmf {
    /// Validates axis names, table size, entries and total mass.
    pub fn new(axes: Vec<Axis>, table: Vec<f64>) -> Result<Self> {
        let j = Self::unnormalised(axes, table)?;
        check_mass(&j.table, "joint pmf")?;
        Ok(j)
    }

    /// Like [`JointPmf::new`] without the unit-mass check; used for
    /// marginals of tables that are already known to be valid.
    pub(crate) fn unnormalised(axes: Vec<Axis>, table: Vec<f64>) -> Result<Self> {
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::validation(format!(
                    "duplicate axis name `{}`",
                    a.name
                )));
            }
        }
        let size = check_table_size(axes.iter().map(|a| a.card))?;
        if size != table.len() {
            return Err(Error::validation(format!(
                "table has {} entries but axes span {size}",
                table.len()
            )));
        }
        check_entries(&table, "joint pmf")?;
        Ok(JointPmf { axes, table })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn mass(&self) -> f64 {
        self.table.iter().sum()
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::usage(format!("unknown axis `{name}`")))
    }

    pub fn card(&self, name: &str) -> Result<usize> {
        Ok(self.axes[self.axis_index(name)?].card)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.axes.len()];
        for k in (0..self.axes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.axes[k + 1].card;
        }
        strides
    }

    /// Probability of one cell, indexed in axis order.
    pub fn get(&self, index: &[usize]) -> f64 {
        debug_assert_eq!(index.len(), self.axes.len());
        let flat = index
            .iter()
            .zip(self.strides())
            .map(|(i, s)| i * s)
            .sum::<usize>();
        self.table[flat]
    }

    /// Sums out every axis not listed in `keep`. The result has its axes in
    /// the order given by `keep`.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointPmf> {
        let positions = keep
            .iter()
            .map(|n| self.axis_index(n))
            .collect::<Result<Vec<_>>>()?;
        for (i, p) in positions.iter().enumerate() {
            if positions[..i].contains(p) {
                return Err(Error::usage(format!("axis `{}` listed twice", keep[i])));
            }
        }
        let out_axes: Vec<Axis> = positions.iter().map(|&p| self.axes[p].clone()).collect();
        let out_size: usize = out_axes.iter().map(|a| a.card).product();

        // Stride of each source axis inside the output table (0 = summed out).
        let mut out_stride = vec![0usize; self.axes.len()];
        let mut s = 1;
        for &p in positions.iter().rev() {
            out_stride[p] = s;
            s *= self.axes[p].card;
        }

        let mut out = vec![0.0; out_size];
        let cards: Vec<usize> = self.axes.iter().map(|a| a.card).collect();
        let mut idx = vec![0usize; cards.len()];
        let mut target = 0usize;
        for &v in &self.table {
            out[target] += v;
            // odometer increment, last axis fastest
            for k in (0..cards.len()).rev() {
                idx[k] += 1;
                target += out_stride[k];
                if idx[k] < cards[k] {
                    break;
                }
                target -= out_stride[k] * cards[k];
                idx[k] = 0;
            }
        }
        JointPmf::unnormalised(out_axes, out)
    }

    /// Joint entropy in bits of the listed axes (empty group gives 0).
    pub fn entropy_of(&self, group: &[&str]) -> Result<f64> {
        if group.is_empty() {
            return Ok(0.0);
        }
        Ok(entropy_bits(self.marginalize(group)?.table()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_axis() -> JointPmf {
        let raw: Vec<f64> = (1..=12).map(|v| v as f64).collect();
        let total: f64 = raw.iter().sum();
        JointPmf::new(
            vec![Axis::new("A", 2), Axis::new("B", 3), Axis::new("C", 2)],
            raw.iter().map(|v| v / total).collect(),
        )
        .unwrap()
    }

    #[test]
    fn marginal_to_all_axes_is_identity() {
        let j = three_axis();
        let m = j.marginalize(&["A", "B", "C"]).unwrap();
        assert_eq!(m, j);
    }

    #[test]
    fn marginal_matches_direct_summation() {
        let j = three_axis();
        let m = j.marginalize(&["C", "A"]).unwrap();
        for c in 0..2 {
            for a in 0..2 {
                let direct: f64 = (0..3).map(|b| j.get(&[a, b, c])).sum();
                assert!((m.get(&[c, a]) - direct).abs() < 1e-15);
            }
        }
        assert!((m.mass() - j.mass()).abs() < 1e-15);
    }

    #[test]
    fn unknown_axis_and_duplicates_are_usage_errors() {
        let j = three_axis();
        assert!(matches!(j.marginalize(&["Q"]), Err(Error::Usage(_))));
        assert!(matches!(j.marginalize(&["A", "A"]), Err(Error::Usage(_))));
    }

    #[test]
    fn duplicate_axis_names_rejected() {
        let r = JointPmf::new(vec![Axis::new("A", 1), Axis::new("A", 1)], vec![1.0]);
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn oversized_table_rejected() {
        let r = JointPmf::new(vec![Axis::new("A", 10_000), Axis::new("B", 10_000)], vec![]);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }
}
