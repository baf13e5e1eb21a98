use super::{check_entries, check_mass};
use crate::Result;

/// A validated probability vector over a single labelled axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    label: String,
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(label: impl Into<String>, probs: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if probs.is_empty() {
            return Err(crate::Error::validation(format!("pmf `{label}` is empty")));
        }
        check_entries(&probs, &format!("pmf `{label}`"))?;
        check_mass(&probs, &format!("pmf `{label}`"))?;
        Ok(Pmf { label, probs })
    }

    pub fn uniform(label: impl Into<String>, size: usize) -> Result<Self> {
        let size = size.max(1);
        Pmf::new(label, vec![1.0 / size as f64; size])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }
}

/// Shannon entropy in bits of a validated pmf.
pub fn entropy(p: &Pmf) -> f64 {
    p.entropy()
}

/// `-sum p log2 p` over the positive entries of an unnormalised slice.
///
/// No validation; callers that need it go through [`Pmf`].
pub fn entropy_bits(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn uniform_binary_is_one_bit() {
        assert_eq!(entropy(&Pmf::uniform("a", 2).unwrap()), 1.0);
    }

    #[test]
    fn point_mass_is_zero() {
        let p = Pmf::new("a", vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(entropy(&p), 0.0);
    }

    #[test]
    fn quarter_three_quarters() {
        // -0.25 log2 0.25 - 0.75 log2 0.75
        let p = Pmf::new("a", vec![0.25, 0.75]).unwrap();
        assert!((entropy(&p) - 0.811_278_124_459_132_8).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_and_unnormalised() {
        assert!(matches!(
            Pmf::new("a", vec![-0.1, 1.1]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Pmf::new("a", vec![0.5, 0.6]),
            Err(Error::Validation(_))
        ));
        assert!(Pmf::new("a", vec![0.5, 0.5 + 5e-13]).is_ok());
    }
}
