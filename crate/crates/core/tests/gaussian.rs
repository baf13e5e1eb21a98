use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wiretap_core::gaussian::{
    admissible_power, alpha_star, case1_region, case1_thresholds, case2_region, case2_thresholds,
    case_region_in_regime, closed_form, leakage, leakage_roots, r_alpha, rz_alpha, validate,
    CaseId, CaseRegion, GaussianWiretapParams, Regime,
};

fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

/// Supremum of `min(R, R_U1(alpha))` over alphas with `R(alpha) >= R`,
/// scanned on a fine grid (plus the Costa point).
fn numeric_supremum(params: &GaussianWiretapParams, alpha_c: f64, rates: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=20_000).map(|k| -5.0 + 5e-4 * k as f64).collect();
    grid.push(alpha_c);
    let pairs: Vec<(f64, f64)> = grid
        .iter()
        .map(|&a| {
            let r = r_alpha(params, a).unwrap();
            (r, r.min(rz_alpha(params, a).unwrap()))
        })
        .collect();
    rates
        .iter()
        .map(|&target| {
            pairs
                .iter()
                .filter(|(r, _)| *r >= target - 1e-9)
                .map(|(_, ru1)| target.min(*ru1))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

fn region_params(reg: &CaseRegion, q: f64, n1: f64, n2: f64) -> GaussianWiretapParams {
    match reg.case_id {
        CaseId::CaseI => GaussianWiretapParams::case_one(reg.p, q, n1, n2).unwrap(),
        CaseId::CaseII => GaussianWiretapParams::case_two(reg.p, q, n1, n2).unwrap(),
    }
}

#[test]
fn closed_forms_agree_with_oracle_on_default_grid() {
    let (points, alphas) = validate::default_grid();
    let report = validate::sweep(&points, &alphas).unwrap();
    assert!(
        report.violations().is_empty(),
        "{:?}",
        &report.violations()[..3.min(report.violations().len())]
    );
    for s in &report.summary {
        if !s.documented {
            assert_eq!(s.listed, 0, "{:?}", s);
            assert!(s.max_abs_err <= 1e-9, "{:?}", s);
        }
    }
    // The printed leakage forms deviate whenever correlations are present;
    // the report must say so.
    let leak = report
        .summary
        .iter()
        .find(|s| s.quantity == validate::Quantity::Leakage)
        .unwrap();
    assert!(leak.listed > 0);
}

#[test]
fn leakage_at_zero_worked_value() {
    let g = GaussianWiretapParams::uncorrelated(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    assert_abs_diff_eq!(
        leakage(&g, 0.0).unwrap(),
        0.292_481_250_360_578_3,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        closed_form::leakage_at_zero(&g).unwrap(),
        0.292_481_250_360_578_3,
        epsilon = 1e-12
    );
}

#[test]
fn costa_point_recovers_main_capacity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (p, q, n1) = (
            rng.random_range(0.05..10.0),
            rng.random_range(0.05..10.0),
            rng.random_range(0.05..10.0),
        );
        let g = GaussianWiretapParams::case_one(p, q, n1, 1.0).unwrap();
        let r = r_alpha(&g, p / (p + n1)).unwrap();
        assert_abs_diff_eq!(r, half_log2((p + n1) / n1), epsilon = 1e-9);
    }
    let g = GaussianWiretapParams::case_one(1.0, 1.0, 1.0, 1.0).unwrap();
    assert_abs_diff_eq!(r_alpha(&g, 0.5).unwrap(), 0.5, epsilon = 1e-12);
}

#[test]
fn case_rate_matches_printed_special_form() {
    // R(alpha) = 1/2 log[P(P+Q+N1) / ((P + a^2 Q)(P+Q+N1) - (P + a Q)^2)]
    for (p, q, n1, n2) in [(1.0, 1.0, 0.25, 1.0), (3.0, 0.5, 2.0, 0.7)] {
        for a in [-1.5, -0.2, 0.0, 0.3, 0.9, 2.0] {
            let printed = half_log2(
                p * (p + q + n1) / ((p + a * a * q) * (p + q + n1) - (p + a * q) * (p + a * q)),
            );
            let c1 = GaussianWiretapParams::case_one(p, q, n1, n2).unwrap();
            let c2 = GaussianWiretapParams::case_two(p, q, n1, n2).unwrap();
            assert_abs_diff_eq!(r_alpha(&c1, a).unwrap(), printed, epsilon = 1e-9);
            assert_abs_diff_eq!(r_alpha(&c2, a).unwrap(), printed, epsilon = 1e-9);
        }
    }
}

#[test]
fn case_one_wiretap_rate_extrema() {
    let (p, q) = (1.5, 2.0);
    let g = GaussianWiretapParams::case_one(p, q, 0.4, 0.8).unwrap();
    let h = 1e-4;
    let slope = |a: f64| (rz_alpha(&g, a + h).unwrap() - rz_alpha(&g, a - h).unwrap()) / (2.0 * h);
    assert!(slope(1.0).abs() < 1e-6);
    assert!(slope(-p / q).abs() < 1e-6);
    // increasing between the extrema, decreasing outside
    assert!(slope(0.0) > 0.0);
    assert!(slope(1.5) < 0.0 && slope(-p / q - 0.5) < 0.0);
}

#[test]
fn case_two_wiretap_rate_not_stationary_at_one() {
    // The claim that R_Z has extrema at 1 and -P/Q does not carry over to
    // independent states; the region code never relies on it.
    let g = GaussianWiretapParams::case_two(1.0, 1.0, 1.0, 1.0).unwrap();
    let h = 1e-4;
    let slope = (rz_alpha(&g, 1.0 + h).unwrap() - rz_alpha(&g, 1.0 - h).unwrap()) / (2.0 * h);
    assert!(slope.abs() > 1e-3, "{slope}");
}

#[test]
fn leakage_structure_case_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let (p, q) = (rng.random_range(0.1..5.0), rng.random_range(0.1..5.0));
        let (n1, n2) = (rng.random_range(0.1..5.0), rng.random_range(0.1..5.0));
        let g = GaussianWiretapParams::case_one(p, q, n1, n2).unwrap();
        assert!(leakage(&g, 0.0).unwrap() > 0.0);
        let star = alpha_star(&g).unwrap();
        let roots = leakage_roots(&g).unwrap();
        let (lo, hi) = (roots.neg.unwrap(), roots.pos.unwrap());
        assert!(lo < star.value && star.value < hi);
        assert!(leakage(&g, lo).unwrap().abs() < 1e-8);
        assert!(leakage(&g, hi).unwrap().abs() < 1e-8);
        let mut best = (f64::NEG_INFINITY, 0.0);
        for k in 0..=20_000 {
            let a = star.value - 10.0 + 1e-3 * k as f64;
            let v = leakage(&g, a).unwrap();
            assert!(star.max_leakage >= v - 1e-8);
            if v > best.0 {
                best = (v, a);
            }
        }
        assert!((best.1 - star.value).abs() <= 1e-3);
    }
}

#[test]
fn printed_maximiser_reported_when_it_misses() {
    let g = GaussianWiretapParams::case_one(1.0, 1.0, 1.0, 1.0).unwrap();
    let s = alpha_star(&g).unwrap();
    // stationary point of Var(U)Var(Z) - Cov(U,Z)^2: P Q / (Q Var(Z) - Q^2)
    assert_abs_diff_eq!(s.value, 1.0 / (4.0 - 1.0), epsilon = 1e-12);
    let printed = s.printed.unwrap();
    assert_abs_diff_eq!(printed, 1.0 / (2.0 * 4.0 - 1.0), epsilon = 1e-12);
    assert!(s.printed_shortfall.unwrap() > 1e-6);
}

#[test]
fn leakage_at_zero_can_be_negative_with_input_state_correlation() {
    let g = GaussianWiretapParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.9, 0.0, 0.0).unwrap();
    assert!(leakage(&g, 0.0).unwrap() < 0.0);
}

#[test]
fn worked_thresholds() {
    let (p1, p2) = case1_thresholds(1.0, 0.25, 1.0).unwrap();
    assert_abs_diff_eq!(p1, 0.368_034, epsilon = 1e-6);
    assert_abs_diff_eq!(p2, 0.724_745, epsilon = 1e-6);
    let (p3, p4) = case2_thresholds(1.0, 1.0, 1.0).unwrap();
    assert_abs_diff_eq!(p3, 0.618_034, epsilon = 1e-6);
    assert_abs_diff_eq!(p4, 2.0, epsilon = 1e-12);
}

#[test]
fn branches_meet_at_lower_thresholds() {
    for (q, n1, n2) in [(1.0, 1.0, 1.0), (2.0, 0.5, 1.5)] {
        let (p3, _) = case2_thresholds(q, n1, n2).unwrap();
        let low = case_region_in_regime(CaseId::CaseII, p3, q, n1, n2, 41, Regime::Low).unwrap();
        let mid = case_region_in_regime(CaseId::CaseII, p3, q, n1, n2, 41, Regime::Mid).unwrap();
        for (a, b) in low.boundary.iter().zip(&mid.boundary) {
            assert!((a.rd_cap - b.rd_cap).abs() < 1e-3, "{a:?} {b:?}");
        }
    }
    let (p1, _) = case1_thresholds(1.0, 0.25, 1.0).unwrap();
    let low = case_region_in_regime(CaseId::CaseI, p1, 1.0, 0.25, 1.0, 41, Regime::Low).unwrap();
    let mid = case_region_in_regime(CaseId::CaseI, p1, 1.0, 0.25, 1.0, 41, Regime::Mid).unwrap();
    for (a, b) in low.boundary.iter().zip(&mid.boundary) {
        assert!((a.rd_cap - b.rd_cap).abs() < 1e-3);
    }
}

#[test]
fn case_one_boundary_matches_union_supremum() {
    for p in [0.2, 0.5, 0.7, 2.0] {
        let (q, n1, n2) = (1.0, 0.25, 1.0);
        let reg = case1_region(p, q, n1, n2, 21).unwrap();
        let g = region_params(&reg, q, n1, n2);
        let rates: Vec<f64> = reg.boundary.iter().map(|b| b.r).collect();
        let sup = numeric_supremum(&g, reg.alpha_costa, &rates);
        for (b, s) in reg.boundary.iter().zip(sup) {
            assert!(
                (b.effective_cap() - s).abs() < 2e-3,
                "P={p} {:?} sup {s}",
                b
            );
            assert!(b.rd_cap <= reg.c_m + 1e-9);
        }
    }
}

#[test]
fn case_two_boundary_is_achievable() {
    for p in [0.3, 1.0, 1.5, 3.0] {
        let (q, n1, n2) = (1.0, 1.0, 1.0);
        let reg = case2_region(p, q, n1, n2, 21).unwrap();
        let g = region_params(&reg, q, n1, n2);
        let rates: Vec<f64> = reg.boundary.iter().map(|b| b.r).collect();
        let sup = numeric_supremum(&g, reg.alpha_costa, &rates);
        for (b, s) in reg.boundary.iter().zip(sup) {
            assert!(b.effective_cap() <= s + 2e-3, "P={p} {:?} sup {s}", b);
            if reg.regime != Regime::High {
                assert!((b.effective_cap() - s).abs() < 2e-3);
            }
        }
    }
}

#[test]
fn stateless_reduction() {
    for (p, n1, n2) in [(1.0, 0.5, 2.0), (3.0, 2.0, 1.0)] {
        let g = GaussianWiretapParams::uncorrelated(p, 0.0, 0.0, n1, n2).unwrap();
        let rz = rz_alpha(&g, 0.0).unwrap().max(0.0);
        let want = (half_log2(1.0 + p / n1) - half_log2(1.0 + p / n2)).max(0.0);
        assert_abs_diff_eq!(rz, want, epsilon = 1e-12);
    }
}

proptest! {
    #[test]
    fn thresholds_ordered(q in 1e-3f64..50.0, n1 in 1e-3f64..50.0, n2 in 1e-3f64..50.0) {
        let (p1, p2) = case1_thresholds(q, n1, n2).unwrap();
        prop_assert!(p1 < p2);
        if let Ok((p3, p4)) = case2_thresholds(q, n1, n2) {
            prop_assert!(p3 < p4);
        }
    }

    #[test]
    fn leakage_at_zero_positive_without_input_state_correlation(
        p in 0.05f64..10.0, q1 in 0.0f64..10.0, q2 in 0.0f64..10.0,
        n1 in 0.05f64..10.0, n2 in 0.05f64..10.0, rho in -0.999f64..0.999,
    ) {
        let g = GaussianWiretapParams::new(p, q1, q2, n1, n2, 0.0, 0.0, rho).unwrap();
        prop_assert!(leakage(&g, 0.0).unwrap() > 0.0);
    }

    #[test]
    fn admissible_power_monotone(p in 0.1f64..10.0, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0, r1 in -0.99f64..0.99, r2 in -0.99f64..0.99) {
        let (elo, ehi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let (rlo, rhi) = if r1.abs() <= r2.abs() { (r1, r2) } else { (r2, r1) };
        prop_assert!(admissible_power(p, ehi, rlo).unwrap() <= admissible_power(p, elo, rlo).unwrap());
        prop_assert!(admissible_power(p, elo, rhi).unwrap() <= admissible_power(p, elo, rlo).unwrap());
        prop_assert!(admissible_power(p, elo, rlo).unwrap() <= p);
    }

    #[test]
    fn roots_vanish(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: f64 = rng.random_range(-0.7..0.7);
        let b: f64 = rng.random_range(-0.7..0.7);
        let c: f64 = rng.random_range(-0.7..0.7);
        let g = GaussianWiretapParams::new(
            rng.random_range(0.1..5.0), rng.random_range(0.1..5.0), rng.random_range(0.1..5.0),
            rng.random_range(0.1..5.0), rng.random_range(0.1..5.0), a, b, c,
        );
        prop_assume!(g.is_ok());
        let g = g.unwrap();
        let roots = leakage_roots(&g).unwrap();
        for r in [roots.neg, roots.pos].into_iter().flatten() {
            prop_assert!(leakage(&g, r).unwrap().abs() < 1e-8);
        }
    }
}
