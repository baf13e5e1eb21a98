use super::{check_table_size, Axis, JointPmf, TransitionKernel};
use crate::{Error, Result};

/// Canonical axis names of the wiretap joint law.
pub mod names {
    pub const U: &str = "U";
    pub const X: &str = "X";
    pub const V1: &str = "V1";
    pub const V2: &str = "V2";
    pub const Y: &str = "Y";
    pub const Z: &str = "Z";
}

fn expect_axes(what: &str, got: &[Axis], want: &[(&str, usize)]) -> Result<()> {
    let ok = got.len() == want.len()
        && got
            .iter()
            .zip(want)
            .all(|(a, (n, c))| a.name == *n && a.card == *c);
    if ok {
        Ok(())
    } else {
        let got: Vec<String> = got
            .iter()
            .map(|a| format!("{}:{}", a.name, a.card))
            .collect();
        let want: Vec<String> = want.iter().map(|(n, c)| format!("{n}:{c}")).collect();
        Err(Error::usage(format!(
            "{what} axes are [{}], expected [{}]",
            got.join(", "),
            want.join(", ")
        )))
    }
}

/// Builds `p(u,x,v1,v2,y,z) = p(v1,v2) p(u,x|v1,v2) p(y|x,v1) p(z|x,v2)`.
///
/// `state` must have axes `(V1, V2)`; `policy` maps `(V1, V2) -> (U, X)`;
/// `main` maps `(X, V1) -> Y`; `wiretap` maps `(X, V2) -> Z`. The output
/// axes are ordered `(U, X, V1, V2, Y, Z)`.
pub fn compose(
    state: &JointPmf,
    policy: &TransitionKernel,
    main: &TransitionKernel,
    wiretap: &TransitionKernel,
) -> Result<JointPmf> {
    use names::*;
    let sa = state.axes();
    if sa.len() != 2 || sa[0].name != V1 || sa[1].name != V2 {
        return Err(Error::usage("state pmf must have axes (V1, V2)"));
    }
    let (nv1, nv2) = (sa[0].card, sa[1].card);
    let pa = policy.outputs();
    if pa.len() != 2 || pa[0].name != U || pa[1].name != X {
        return Err(Error::usage("policy outputs must be (U, X)"));
    }
    let (nu, nx) = (pa[0].card, pa[1].card);
    expect_axes("policy input", policy.inputs(), &[(V1, nv1), (V2, nv2)])?;
    expect_axes("main kernel input", main.inputs(), &[(X, nx), (V1, nv1)])?;
    expect_axes(
        "wiretap kernel input",
        wiretap.inputs(),
        &[(X, nx), (V2, nv2)],
    )?;
    if main.outputs().len() != 1 || main.outputs()[0].name != Y {
        return Err(Error::usage("main kernel output must be Y"));
    }
    if wiretap.outputs().len() != 1 || wiretap.outputs()[0].name != Z {
        return Err(Error::usage("wiretap kernel output must be Z"));
    }
    let ny = main.output_size();
    let nz = wiretap.output_size();
    let axes = vec![
        Axis::new(U, nu),
        Axis::new(X, nx),
        Axis::new(V1, nv1),
        Axis::new(V2, nv2),
        Axis::new(Y, ny),
        Axis::new(Z, nz),
    ];
    let size = check_table_size(axes.iter().map(|a| a.card))?;
    let mut table = vec![0.0; size];
    let st = state.table();
    for u in 0..nu {
        for x in 0..nx {
            for v1 in 0..nv1 {
                let main_row = main.row(x * nv1 + v1);
                for v2 in 0..nv2 {
                    let s = v1 * nv2 + v2;
                    let w = st[s] * policy.prob(s, u * nx + x);
                    if w == 0.0 {
                        continue;
                    }
                    let wire_row = wiretap.row(x * nv2 + v2);
                    let base = ((((u * nx + x) * nv1 + v1) * nv2 + v2) * ny) * nz;
                    for (y, &py) in main_row.iter().enumerate() {
                        let wy = w * py;
                        for (z, &pz) in wire_row.iter().enumerate() {
                            table[base + y * nz + z] = wy * pz;
                        }
                    }
                }
            }
        }
    }
    JointPmf::new(axes, table)
}
