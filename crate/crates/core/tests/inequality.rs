use std::f64::consts::E;

use approx::assert_abs_diff_eq;
use frac_gauss_iso::gauss_core::{constants, iso_function, phi_inv};
use frac_gauss_iso::inequality::{
    closeness_height_bound, constant_c, f_weight, f_weight_floor, random_family, run_suite,
    sigma_min, verify_levelset_bounds, verify_levelset_closeness, verify_main,
    verify_transfer_lemma, z_thresholds, Branch, ConstantParams, LemmaOutcome, SetAnalysis, Suite,
    SuiteConfig,
};
use frac_gauss_iso::set_model::asymmetry;
use frac_gauss_iso::spectral::{halfspace_series, perimeter_spectral};
use frac_gauss_iso::{Convention, FractionalOrder, GaussianSet};
use proptest::prelude::*;

const INF: f64 = f64::INFINITY;
const K: usize = 10_000;

fn order(s: f64) -> FractionalOrder {
    FractionalOrder::new(s).unwrap()
}

fn params(c: f64) -> ConstantParams {
    ConstantParams::new(c).unwrap()
}

#[test]
fn sigma_min_examples() {
    let v = sigma_min(0.2).unwrap();
    let left = (-0.5 * phi_inv(0.2 * 5.0 / 9.0).unwrap().powi(2)).exp();
    assert_abs_diff_eq!(v, left, epsilon = 1e-14);
    assert!(v < iso_function(0.2 * 13.0 / 9.0).unwrap());

    let m = 0.45;
    let lo = iso_function(5.0 * m / 9.0).unwrap();
    let hi = iso_function(13.0 * m / 9.0).unwrap();
    assert_eq!(sigma_min(m).unwrap(), lo.min(hi));

    assert!(sigma_min(0.3).unwrap() <= iso_function(0.3).unwrap());
    assert!(sigma_min(0.7).is_err());
    assert!(sigma_min(0.0).is_err());
}

#[test]
fn sigma_min_is_the_interval_minimum() {
    for i in 1..60 {
        let m = 0.69 * i as f64 / 60.0;
        let v = sigma_min(m).unwrap();
        let sampled = (0..=200)
            .map(|j| iso_function(m * (5.0 + 8.0 * j as f64 / 200.0) / 9.0).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(v, sampled, epsilon = 1e-14);
    }
}

#[test]
fn f_weight_examples() {
    assert_abs_diff_eq!(f_weight(0.5).unwrap(), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(f_weight(0.17).unwrap(), f_weight(0.83).unwrap(), epsilon = 1e-12);
    assert_abs_diff_eq!(f_weight_floor(), E.sqrt() / 2.0, epsilon = 1e-16);
    assert_abs_diff_eq!(f_weight_floor(), 0.824361, epsilon = 1e-6);
    let min = (1..100)
        .map(|i| f_weight(i as f64 / 100.0).unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(min >= f_weight_floor(), "{min}");
    // The floor is attained where Φ⁻¹(m)² = 1.
    let at_one = f_weight(frac_gauss_iso::gauss_core::phi(1.0)).unwrap();
    assert_abs_diff_eq!(at_one, f_weight_floor(), epsilon = 1e-12);
    assert!(f_weight(1.0).is_err());
}

#[test]
fn z_threshold_examples() {
    let s = order(0.5);
    let z = z_thresholds(0.0, 0.3, s, 0.2, 0.1).unwrap();
    assert!(z.degenerate);
    assert_eq!((z.z0, z.z1), (0.0, 0.0));

    let e = GaussianSet::new([(-INF, -0.1), (0.2, 0.5)]).unwrap();
    let m = e.measure();
    let a = asymmetry(&e).unwrap().value;
    let p_e = perimeter_spectral(&e, s, K, Convention::WithConstant).unwrap().value;
    let p_h = halfspace_series(phi_inv(m).unwrap(), s, K, Convention::WithConstant)
        .unwrap()
        .value;
    let z = z_thresholds(a, m, s, p_e, p_h).unwrap();
    let beta = constants(s).beta_s;
    assert!(z.z0 > 0.0 && z.z1 > 0.0 && !z.degenerate);
    assert_abs_diff_eq!(z.z0, (a * m / (72.0 * beta * p_e)).powi(2), epsilon = 1e-15);
    assert_abs_diff_eq!(z.z1, (a * m / (144.0 * beta * p_h)).powi(2), epsilon = 1e-15);
}

#[test]
fn z1_below_z0_on_random_sets() {
    let s = order(0.5);
    let mut checked = 0;
    for e in random_family(11, 300) {
        let a = SetAnalysis::new(&e, s, 2000, Convention::WithConstant).unwrap();
        if a.asym.value == 0.0 || a.p_e.value > 2.0 * a.p_h.value {
            continue;
        }
        let z = z_thresholds(a.asym.value, a.m, s, a.p_e.value, a.p_h.value).unwrap();
        assert!(z.z1 < z.z0, "{e}");
        checked += 1;
    }
    assert!(checked > 200);
}

#[test]
fn constant_examples() {
    let s = order(0.5);
    assert!(constant_c(s, 0.3, params(1.0), 0.1).unwrap() > 0.0);
    let one = constant_c(s, 0.3, params(1.0), 0.1).unwrap();
    let two = constant_c(s, 0.3, params(2.0), 0.1).unwrap();
    assert_eq!(two, one / 2.0);
    assert!(ConstantParams::new(0.0).is_err());
    assert_eq!(ConstantParams::default().c, 1.0);
}

/// Frozen from an independent 40-digit evaluation of the closed form at
/// s = ½, m = ½, c = 1, P_H = 0.1, where β_{1/2} = 2 and σ_m = I(5/18).
const GOLDEN_CONSTANT: f64 = 2.0113367593371028e-7;

#[test]
fn constant_golden_value() {
    let v = constant_c(order(0.5), 0.5, params(1.0), 0.1).unwrap();
    assert!((v - GOLDEN_CONSTANT).abs() <= 1e-12 * GOLDEN_CONSTANT, "{v:e}");
}

/// The constant read off the line before the final simplification:
/// (3²·5²/(676c))·(A/m)·(σ_m/16)·(√e/(2−s))·z1^{2−s}, divided by A^{2/s}.
fn constant_before_simplification(s: f64, m: f64, c: f64, p_h: f64, a: f64) -> f64 {
    let beta = constants(order(s)).beta_s;
    let z1 = (a * m / (144.0 * beta * p_h)).powf(1.0 / s);
    let sigma = sigma_min(m).unwrap();
    9.0 * 25.0 / (676.0 * c) * (a / m) * (sigma / 16.0) * E.sqrt() / (2.0 - s) * z1.powf(2.0 - s)
        / a.powf(2.0 / s)
}

#[test]
fn constant_matches_second_transcription() {
    for (s, m, c, p_h) in [
        (0.5, 0.5, 1.0, 0.1),
        (0.25, 0.2, 1.0, 0.03),
        (0.75, 0.41, 3.0, 0.2),
        (0.9, 0.07, 0.5, 0.05),
    ] {
        for a in [0.05, 0.7, 1.9] {
            let v = constant_c(order(s), m, params(c), p_h).unwrap();
            let w = constant_before_simplification(s, m, c, p_h, a);
            assert!((v - w).abs() <= 1e-12 * w, "s={s} m={m}: {v:e} vs {w:e}");
        }
    }
}

#[test]
fn constant_normalizes_mass() {
    let s = order(0.75);
    assert_eq!(
        constant_c(s, 0.8, params(1.0), 0.1).unwrap(),
        constant_c(s, 1.0 - 0.8, params(1.0), 0.1).unwrap()
    );
}

#[test]
fn constant_monotone_dependence() {
    let s = order(0.5);
    let cs = [0.1, 0.5, 1.0, 2.0, 10.0, 100.0];
    let vals: Vec<f64> = cs.iter().map(|&c| constant_c(s, 0.3, params(c), 0.1).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[0] > w[1]));

    // C/σ_m does not depend on σ_m, so C is strictly increasing in σ_m.
    for m in [0.05, 0.2, 0.35, 0.5] {
        let c = constant_c(s, m, params(1.0), 0.1).unwrap();
        let rest = constant_before_simplification(0.5, m, 1.0, 0.1, 1.0) / sigma_min(m).unwrap();
        assert!((c / sigma_min(m).unwrap() - rest).abs() <= 1e-12 * rest);
        assert!(rest > 0.0);
    }
}

#[test]
fn main_report_examples() {
    let s = order(0.5);
    let h = verify_main(&GaussianSet::left_halfline(0.3), s, params(1.0), K).unwrap();
    assert_abs_diff_eq!(h.deficit, 0.0, epsilon = 1e-12);
    assert_eq!(h.rhs, 0.0);
    assert!(h.satisfied);

    let e = GaussianSet::new([(-INF, -0.05), (0.1, 0.4)]).unwrap();
    let r = verify_main(&e, s, params(1.0), K).unwrap();
    assert!(r.satisfied, "{r:?}");
    assert_eq!(r.c_assumed, 1.0);
    assert_abs_diff_eq!(r.deficit, r.p_e.value - r.p_h.value, epsilon = 1e-15);
    assert!(r.rhs >= 0.0);

    let rc = verify_main(&e.complement(), s, params(1.0), K).unwrap();
    assert_abs_diff_eq!(r.deficit, rc.deficit, epsilon = 1e-12);
    assert_abs_diff_eq!(r.asym, rc.asym, epsilon = 1e-12);
    assert_abs_diff_eq!(r.rhs, rc.rhs, epsilon = 1e-12 * r.rhs.max(1e-300));
    assert_eq!(r.branch, rc.branch);

    assert!(verify_main(&GaussianSet::empty(), s, params(1.0), K).is_err());
    assert!(verify_main(&GaussianSet::real_line(), s, params(1.0), K).is_err());
}

#[test]
fn reports_use_one_branch_with_its_formula() {
    let mut seen = [false; 2];
    for sv in [0.25, 0.5, 0.75] {
        let s = order(sv);
        for e in random_family(5, 120) {
            let r = verify_main(&e, s, params(1.0), 4000).unwrap();
            let m = r.m.min(1.0 - r.m);
            let asym = if r.m > 0.5 {
                asymmetry(&e.complement()).unwrap().value
            } else {
                asymmetry(&e).unwrap().value
            };
            assert_abs_diff_eq!(r.asym, asym, epsilon = 1e-15);
            let large = r.p_e.value > 2.0 * r.p_h.value;
            let expected = if large {
                assert_eq!(r.branch, Branch::LargePerimeter);
                seen[1] = true;
                r.p_h.value / 2f64.powf(2.0 / sv) * asym.powf(2.0 / sv)
            } else {
                assert_eq!(r.branch, Branch::Main);
                seen[0] = true;
                constant_c(s, m, params(1.0), r.p_h.value).unwrap() * asym.powf(2.0 / sv)
            };
            assert!((r.rhs - expected).abs() <= 1e-12 * expected.max(1e-300));
            assert_eq!(r.budget, 2.0 * (r.p_e.tail_bound + r.p_h.tail_bound));
            assert_eq!(r.satisfied, r.deficit >= r.rhs - r.budget);
        }
    }
    assert!(seen[0] && seen[1], "both branches exercised: {seen:?}");
}

#[test]
fn deficit_nonnegative_on_random_sets() {
    for sv in [0.25, 0.5, 0.75] {
        let s = order(sv);
        for e in random_family(99, 500) {
            let a = SetAnalysis::new(&e, s, K, Convention::WithConstant).unwrap();
            assert!(a.deficit() >= -a.budget(), "{e} s={sv}: {} < −{}", a.deficit(), a.budget());
        }
    }
}

#[test]
fn transfer_examples() {
    let e = GaussianSet::new([(-1.0, 0.2), (0.9, 2.0)]).unwrap();
    let same = verify_transfer_lemma(&e, &e, 0.2).unwrap();
    assert_eq!(same.outcome, LemmaOutcome::Holds);
    assert_eq!(same.c_kappa, 1.0);
    assert_eq!(same.closeness, 0.0);

    let f = GaussianSet::left_halfline(0.4);
    let trivial = verify_transfer_lemma(&e, &f, 0.3).unwrap();
    assert_eq!(trivial.asym_f, 0.0);
    assert_eq!(trivial.outcome, LemmaOutcome::Holds);

    // A far-away perturbation fails the closeness hypothesis.
    let far = GaussianSet::new([(-1.0, 0.2)]).unwrap();
    let out = verify_transfer_lemma(&far, &e, 0.1).unwrap();
    assert_eq!(out.outcome, LemmaOutcome::Inapplicable);

    // Growing F by a sliver: E ⊄ F, so c_κ = 1 + 2κ.
    let grown = GaussianSet::new([(-1.0, 0.2), (0.9, 2.01)]).unwrap();
    let out = verify_transfer_lemma(&grown, &e, 0.3).unwrap();
    assert_eq!(out.c_kappa, 1.6);
    assert_eq!(out.outcome, LemmaOutcome::Holds);
    assert_abs_diff_eq!(out.required, 0.4 / 1.6 * out.asym_f, epsilon = 1e-15);

    for kappa in [0.0, 0.5, -0.1] {
        assert!(verify_transfer_lemma(&e, &e, kappa).is_err());
    }
}

#[test]
fn transfer_suite_has_no_violations() {
    let cfg = SuiteConfig::default();
    let out = run_suite(Suite::Transfer, &cfg);
    assert_eq!(out.cases, 500);
    assert!(out.failures.is_empty(), "{:?}", out.failures);
    assert!(out.passed > 300);
}

#[test]
fn closeness_examples() {
    let s = order(0.5);
    let half = GaussianSet::left_halfline(0.0);
    let upper = perimeter_spectral(&half, s, K, Convention::WithConstant).unwrap().upper();
    let z = 0.9 * closeness_height_bound(s, 20.0, upper);
    let h = verify_levelset_closeness(&half, s, 0.5, z, 20.0, K).unwrap();
    assert!(h.holds);
    assert!(h.lost < 1e-8 && h.gained < 1e-8, "{} {}", h.lost, h.gained);

    let e = GaussianSet::interval(0.1, 1.2);
    let upper = perimeter_spectral(&e, s, K, Convention::WithConstant).unwrap().upper();
    let z = 0.9 * closeness_height_bound(s, 20.0, upper);
    for t in [0.25, 0.75] {
        let c = verify_levelset_closeness(&e, s, t, z, 20.0, K).unwrap();
        assert!(c.holds, "t={t}: {c:?}");
        assert!(c.lost <= 1.0 / 20.0 + c.budget && c.gained <= 1.0 / 20.0 + c.budget);
    }

    assert!(verify_levelset_closeness(&e, s, 0.2, z, 20.0, K).is_err());
    assert!(verify_levelset_closeness(&e, s, 0.5, 2.0 * z / 0.9, 20.0, K).is_err());
}

#[test]
fn closeness_height_bound_formula() {
    let s = order(0.5);
    let beta = constants(s).beta_s;
    let v = closeness_height_bound(s, 20.0, 0.3);
    assert_abs_diff_eq!(v, (1.0 / (8.0 * 20.0 * beta * 0.3)).powi(2), epsilon = 1e-15);
}

#[test]
fn bounds_examples() {
    let s = order(0.5);
    let h = verify_levelset_bounds(&GaussianSet::left_halfline(0.2), s, 0.5, 0.01, K).unwrap();
    assert!(h.vacuous && h.holds());

    let e = GaussianSet::new([(-INF, -0.3), (0.0, 0.25)]).unwrap();
    let a = SetAnalysis::new(&e, s, K, Convention::WithConstant).unwrap();
    let z0 = a.conservative_thresholds().unwrap().z0;
    let b = verify_levelset_bounds(&e, s, 0.5, z0 / 2.0, K).unwrap();
    assert!(!b.vacuous);
    assert!(b.measure_ok && b.asym_ok && b.sandwich_ok, "{b:?}");
    assert!(b.mu > 5.0 / 9.0 * b.m - b.budget && b.mu < 13.0 / 9.0 * b.m + b.budget);
    assert!((b.mu - b.m).abs() <= 2.0 / 9.0 * b.m * b.asym + b.budget);

    assert!(verify_levelset_bounds(&e, s, 0.5, 2.0 * z0, K).is_err());
    assert!(verify_levelset_bounds(&e, s, 0.9, z0 / 2.0, K).is_err());
}

#[test]
fn small_levelset_suites_pass() {
    let cfg = SuiteConfig {
        size: Some(4),
        ..SuiteConfig::default()
    };
    for suite in [Suite::LevelSet, Suite::Bounds, Suite::Main] {
        let out = run_suite(suite, &cfg);
        assert!(out.ok(), "{}: {:?}", suite.name(), out.failures);
        assert!(out.cases > 0);
    }
}

#[test]
fn random_family_is_reproducible() {
    let a = random_family(7, 50);
    assert_eq!(a, random_family(7, 50));
    assert_ne!(a, random_family(8, 50));
    for e in &a {
        let m = e.measure();
        assert!((0.05..=0.95).contains(&m));
        assert!((1..=4).contains(&e.intervals().len()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transfer_lemma_never_violated(
        a in -2.5f64..1.0,
        w in 0.2f64..2.0,
        tail in any::<bool>(),
        x in -3.0f64..3.0,
        d in 1e-4f64..0.05,
        add in any::<bool>(),
        kappa in 0.01f64..0.49,
    ) {
        let f = if tail {
            GaussianSet::new([(-INF, a - 0.3), (a, a + w)]).unwrap()
        } else {
            GaussianSet::interval(a, a + w)
        };
        let blob = GaussianSet::interval(x, x + d);
        let e = if add { f.union(&blob) } else { f.difference(&blob) };
        let m = e.measure();
        prop_assume!(m > 0.0 && m < 1.0);
        let out = verify_transfer_lemma(&e, &f, kappa).unwrap();
        prop_assert_ne!(out.outcome, LemmaOutcome::Violated);
    }

    #[test]
    fn halfline_deficit_vanishes(r in -2.0f64..2.0, s in 0.1f64..0.9) {
        let rep = verify_main(&GaussianSet::left_halfline(r), order(s), params(1.0), 2000).unwrap();
        prop_assert!(rep.deficit.abs() <= 1e-12);
        prop_assert!(rep.satisfied);
        let rep = verify_main(&GaussianSet::right_halfline(r), order(s), params(1.0), 2000).unwrap();
        prop_assert!(rep.deficit.abs() <= 1e-12);
    }

    #[test]
    fn z1_below_z0_when_perimeter_is_moderate(
        asym in 0.01f64..2.0, m in 0.01f64..0.5, s in 0.05f64..0.95, ph in 0.01f64..1.0, ratio in 0.5f64..2.0,
    ) {
        let z = z_thresholds(asym, m, order(s), ratio * ph, ph).unwrap();
        prop_assert!(z.z1 < z.z0);
    }
}
