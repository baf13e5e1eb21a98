use nalgebra::{DMatrix, Matrix5, SymmetricEigen};

use super::GaussianWiretapParams;
use crate::{Error, Result};

/// Eigenvalues below this fraction of the largest one are treated as zero
/// when a group covariance is singular.
const RANK_TOL: f64 = 1e-12;

/// `1 - s^2` below this level counts as a perfect canonical correlation.
const PERFECT_CORR_TOL: f64 = 1e-12;

/// Variables of the joint covariance, in matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    U = 0,
    V1 = 1,
    V2 = 2,
    Y = 3,
    Z = 4,
}

/// Covariance of `(U, V1, V2, Y, Z)` for `U = X + alpha V1`,
/// `Y = X + V1 + eta1`, `Z = X + V2 + eta2`, built as `A S A^T` from the
/// covariance `S` of the independent-noise base `(X, V1, V2, eta1, eta2)`.
pub fn joint_covariance(params: &GaussianWiretapParams, alpha: f64) -> Result<Matrix5<f64>> {
    params.validate()?;
    let g = params;
    let (sp, s1, s2) = (g.p.sqrt(), g.q1.sqrt(), g.q2.sqrt());
    let base = Matrix5::new(
        g.p,
        g.rho_xv1 * sp * s1,
        g.rho_xv2 * sp * s2,
        0.0,
        0.0,
        g.rho_xv1 * sp * s1,
        g.q1,
        g.rho_v1v2 * s1 * s2,
        0.0,
        0.0,
        g.rho_xv2 * sp * s2,
        g.rho_v1v2 * s1 * s2,
        g.q2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        g.n1,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        g.n2,
    );
    let a = Matrix5::new(
        1.0, alpha, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0,
        1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0,
    );
    let cov = a * base * a.transpose();
    // Symmetrise away rounding asymmetry.
    Ok((cov + cov.transpose()) * 0.5)
}

fn sub(cov: &Matrix5<f64>, rows: &[Var], cols: &[Var]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        cov[(rows[i] as usize, cols[j] as usize)]
    })
}

/// Whitening map `W` (k x n) with `W S W^T = I_k` on the non-degenerate
/// subspace of `S`.
fn whitening(s: DMatrix<f64>) -> DMatrix<f64> {
    let n = s.nrows();
    let eig = SymmetricEigen::new(s);
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..n)
        .filter(|&i| max > 0.0 && eig.eigenvalues[i] > RANK_TOL * max)
        .collect();
    DMatrix::from_fn(keep.len(), n, |r, c| {
        let i = keep[r];
        eig.eigenvectors[(c, i)] / eig.eigenvalues[i].sqrt()
    })
}

/// Gaussian mutual information `I(A;B)` in bits, from canonical
/// correlations: `-1/2 sum log2(1 - s_i^2)`.
///
/// Singular group covariances are reduced to their non-degenerate subspace,
/// so for non-singular inputs this equals
/// `1/2 log2(det S_A det S_B / det S_AB)`. A perfect canonical correlation
/// yields `f64::INFINITY` (the infinite-information marker).
pub fn oracle_mi(cov: &Matrix5<f64>, a: &[Var], b: &[Var]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::usage("mutual information groups must be non-empty"));
    }
    if let Some(v) = a.iter().find(|v| b.contains(v)) {
        return Err(Error::usage(format!(
            "variable {v:?} appears in both groups"
        )));
    }
    let wa = whitening(sub(cov, a, a));
    let wb = whitening(sub(cov, b, b));
    if wa.nrows() == 0 || wb.nrows() == 0 {
        return Ok(0.0);
    }
    let cross = &wa * sub(cov, a, b) * wb.transpose();
    let sv = cross.singular_values();
    let mut total = 0.0;
    for s in sv.iter() {
        let gap = 1.0 - (s * s).min(1.0);
        if gap <= PERFECT_CORR_TOL {
            return Ok(f64::INFINITY);
        }
        total -= 0.5 * gap.log2();
    }
    Ok(total.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use Var::*;

    #[test]
    fn independent_block_structure() {
        let g = GaussianWiretapParams::uncorrelated(1.0, 2.0, 3.0, 1.0, 1.0).unwrap();
        let c = joint_covariance(&g, 0.0).unwrap();
        assert_eq!(c[(U as usize, U as usize)], 1.0);
        assert_eq!(c[(U as usize, Y as usize)], 1.0);
        assert_eq!(c[(U as usize, V1 as usize)], 0.0);
        let c1 = joint_covariance(&g, 1.0).unwrap();
        assert_eq!(c1[(U as usize, U as usize)], 3.0);
    }

    #[test]
    fn bilinearity_oracle() {
        let g = GaussianWiretapParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.5).unwrap();
        let alpha = 0.5;
        let c = joint_covariance(&g, alpha).unwrap();
        // Base covariances.
        let cxx = 1.0;
        let c11 = 1.0;
        let c22 = 1.0;
        let c12 = 0.5;
        // Linear coefficients over (X, V1, V2, eta1, eta2).
        let coef = [
            [1.0, alpha, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 1.0, 0.0],
            [1.0, 0.0, 1.0, 0.0, 1.0],
        ];
        let base = [
            [cxx, 0.0, 0.0, 0.0, 0.0],
            [0.0, c11, c12, 0.0, 0.0],
            [0.0, c12, c22, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
        ];
        for i in 0..5 {
            for j in 0..5 {
                let mut want = 0.0;
                for k in 0..5 {
                    for l in 0..5 {
                        want += coef[i][k] * coef[j][l] * base[k][l];
                    }
                }
                assert_abs_diff_eq!(c[(i, j)], want, epsilon = 1e-15);
            }
        }
        let eig = SymmetricEigen::new(DMatrix::from_fn(5, 5, |i, j| c[(i, j)]));
        assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-9));
    }

    #[test]
    fn bivariate_examples() {
        let mut c = Matrix5::<f64>::identity();
        assert_eq!(oracle_mi(&c, &[U], &[Y]).unwrap(), 0.0);
        c[(0, 3)] = 0.5;
        c[(3, 0)] = 0.5;
        assert_abs_diff_eq!(
            oracle_mi(&c, &[U], &[Y]).unwrap(),
            -0.5 * 0.75f64.log2(),
            epsilon = 1e-12
        );
        c[(0, 3)] = 1.0;
        c[(3, 0)] = 1.0;
        assert_eq!(oracle_mi(&c, &[U], &[Y]).unwrap(), f64::INFINITY);
        assert!(oracle_mi(&c, &[U], &[U, Y]).is_err());
    }

    #[test]
    fn singular_group_is_reduced() {
        // V1 = V2 exactly: I(U; V1, V2) must equal I(U; V1).
        let g = GaussianWiretapParams::case_one(1.0, 1.0, 0.5, 0.5).unwrap();
        let c = joint_covariance(&g, 0.7).unwrap();
        let both = oracle_mi(&c, &[U], &[V1, V2]).unwrap();
        let one = oracle_mi(&c, &[U], &[V1]).unwrap();
        assert_abs_diff_eq!(both, one, epsilon = 1e-12);
        assert_abs_diff_eq!(one, 0.5 * (1.49f64).log2(), epsilon = 1e-12);
    }
}
