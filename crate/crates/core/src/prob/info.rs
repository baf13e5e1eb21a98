use super::{clamp_mi as clamp, JointPmf};
use crate::{Error, Result};

fn check_disjoint(groups: &[(&str, &[&str])]) -> Result<()> {
    for (i, (name_a, a)) in groups.iter().enumerate() {
        for (name_b, b) in &groups[i + 1..] {
            if let Some(shared) = a.iter().find(|x| b.contains(x)) {
                return Err(Error::usage(format!(
                    "groups {name_a} and {name_b} both contain axis `{shared}`"
                )));
            }
        }
    }
    Ok(())
}

/// `I(A;B) = H(A) + H(B) - H(A,B)` in bits.
pub fn mutual_information(j: &JointPmf, a: &[&str], b: &[&str]) -> Result<f64> {
    check_disjoint(&[("A", a), ("B", b)])?;
    let ab: Vec<&str> = a.iter().chain(b.iter()).copied().collect();
    Ok(clamp(
        j.entropy_of(a)? + j.entropy_of(b)? - j.entropy_of(&ab)?,
    ))
}

/// `I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)` in bits.
pub fn conditional_mutual_information(
    j: &JointPmf,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    check_disjoint(&[("A", a), ("B", b), ("C", c)])?;
    let ac: Vec<&str> = a.iter().chain(c).copied().collect();
    let bc: Vec<&str> = b.iter().chain(c).copied().collect();
    let abc: Vec<&str> = a.iter().chain(b).chain(c).copied().collect();
    Ok(clamp(
        j.entropy_of(&ac)? + j.entropy_of(&bc)? - j.entropy_of(&abc)? - j.entropy_of(c)?,
    ))
}
