use approx::assert_abs_diff_eq;
use frac_gauss_iso::gauss_core::{phi, phi_inv};
use frac_gauss_iso::set_model::{asymmetry, ehrhard_symmetrize};
use frac_gauss_iso::{Error, GaussianSet, Halfline, Orientation};
use proptest::prelude::*;

const INF: f64 = f64::INFINITY;

/// Up to four intervals from sorted points in [−3, 3], optionally with
/// unbounded tails.
fn any_set() -> impl Strategy<Value = GaussianSet> {
    (
        prop::collection::vec(-3.0f64..3.0, 0..=8),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(mut pts, left, right)| {
            pts.sort_by(f64::total_cmp);
            if pts.len() % 2 == 1 {
                pts.pop();
            }
            let mut iv: Vec<(f64, f64)> = pts
                .chunks(2)
                .filter(|p| p[0] < p[1])
                .map(|p| (p[0], p[1]))
                .collect();
            if left {
                let end = iv.first().map_or(-3.5, |&(a, _)| a - 0.1);
                iv.insert(0, (-INF, end));
            }
            if right {
                let start = iv.last().map_or(3.5, |&(_, b)| b + 0.1);
                iv.push((start, INF));
            }
            GaussianSet::new(iv).unwrap()
        })
}

fn nondegenerate_set() -> impl Strategy<Value = GaussianSet> {
    any_set().prop_filter("measure in (0.01, 0.99)", |e| {
        let m = e.measure();
        m > 0.01 && m < 0.99
    })
}

/// γ((a, b)) summed directly from the interval list.
fn oracle_measure(e: &GaussianSet) -> f64 {
    e.intervals().iter().map(|&(a, b)| phi(b) - phi(a)).sum()
}

#[test]
fn measure_examples() {
    assert_eq!(GaussianSet::real_line().measure(), 1.0);
    assert_eq!(GaussianSet::empty().measure(), 0.0);
    assert_abs_diff_eq!(GaussianSet::left_halfline(0.0).measure(), 0.5, epsilon = 1e-15);
    let m = GaussianSet::interval(0.0, 1.0).measure();
    assert_abs_diff_eq!(m, phi(1.0) - 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(m, 0.341345, epsilon = 1e-6);
}

#[test]
fn boolean_examples() {
    let e = GaussianSet::new([(-1.0, 0.5), (2.0, INF)]).unwrap();
    assert!(e.symm_diff(&e).is_empty());
    assert_eq!(e.symm_diff(&GaussianSet::empty()), e);
    assert_eq!(
        GaussianSet::left_halfline(0.0).symm_diff(&GaussianSet::left_halfline(1.0)),
        GaussianSet::interval(0.0, 1.0)
    );
    assert_eq!(
        e.intersect(&GaussianSet::interval(0.0, 3.0)),
        GaussianSet::new([(0.0, 0.5), (2.0, 3.0)]).unwrap()
    );
    assert_eq!(e.complement().complement(), e);
}

#[test]
fn canonical_form() {
    let e = GaussianSet::new([(1.0, 2.0), (0.0, 1.0), (-INF, -4.0)]).unwrap();
    assert_eq!(e.intervals(), &[(-INF, -4.0), (0.0, 2.0)]);
    assert!(GaussianSet::new([(1.0, 1.0)]).is_err());
    assert!(GaussianSet::new([(3.0, -3.0)]).is_err());
}

#[test]
fn ehrhard_examples() {
    let h = ehrhard_symmetrize(&GaussianSet::left_halfline(0.8)).unwrap();
    assert_eq!(h.orientation, Orientation::Left);
    assert_abs_diff_eq!(h.r, 0.8, epsilon = 1e-12);

    let h = ehrhard_symmetrize(&GaussianSet::right_halfline(0.0)).unwrap();
    assert_abs_diff_eq!(h.r, 0.0, epsilon = 1e-12);

    let h = ehrhard_symmetrize(&GaussianSet::interval(0.0, 1.0)).unwrap();
    assert_abs_diff_eq!(h.r, -0.4087958, epsilon = 1e-6);
    assert_abs_diff_eq!(h.r, phi_inv(phi(1.0) - 0.5).unwrap(), epsilon = 1e-12);

    assert!(matches!(
        ehrhard_symmetrize(&GaussianSet::empty()),
        Err(Error::DegenerateSet { .. })
    ));
    assert!(ehrhard_symmetrize(&GaussianSet::real_line()).is_err());
}

#[test]
fn asymmetry_examples() {
    for h in [GaussianSet::left_halfline(-0.4), GaussianSet::right_halfline(1.1)] {
        assert_abs_diff_eq!(asymmetry(&h).unwrap().value, 0.0, epsilon = 1e-15);
    }

    let e = GaussianSet::new([(0.0, 1.0), (2.0, INF)]).unwrap();
    assert_abs_diff_eq!(
        asymmetry(&e).unwrap().value,
        asymmetry(&e.reflect()).unwrap().value,
        epsilon = 1e-14
    );

    // E Δ (−∞, 0) = (−∞, −q) ∪ (0, q) with q the upper quartile: ¼ + ¼ of γ,
    // divided by γ(E) = ½.
    let q = phi_inv(0.75).unwrap();
    let a = asymmetry(&GaussianSet::interval(-q, q)).unwrap();
    assert_abs_diff_eq!(a.value, 1.0, epsilon = 1e-12);
    let a = asymmetry(&GaussianSet::interval(-0.6745, 0.6745)).unwrap();
    assert_abs_diff_eq!(a.value, 1.0, epsilon = 1e-4);
}

#[test]
fn asymmetry_reaches_two_when_disjoint_from_both_halflines() {
    let e = GaussianSet::interval(-0.1, 0.1);
    let r = phi_inv(e.measure()).unwrap();
    assert!(r < -0.1);
    assert_abs_diff_eq!(asymmetry(&e).unwrap().value, 2.0, epsilon = 1e-12);
}

#[test]
fn asymmetry_ties_go_left() {
    let q = phi_inv(0.75).unwrap();
    let a = asymmetry(&GaussianSet::interval(-q, q)).unwrap();
    assert_eq!(a.halfline.orientation, Orientation::Left);
}

#[test]
fn halfline_helpers() {
    assert_eq!(Halfline::left(0.3).to_set(), GaussianSet::left_halfline(0.3));
    assert_abs_diff_eq!(Halfline::right(0.0).measure(), 0.5, epsilon = 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn measure_matches_oracle_and_complement(e in any_set()) {
        let m = e.measure();
        prop_assert!((0.0..=1.0).contains(&m));
        prop_assert!((m - oracle_measure(&e)).abs() <= 1e-12);
        prop_assert!((m + e.complement().measure() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn canonical_invariants(e in any_set()) {
        let iv = e.intervals();
        for w in iv.windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
        for &(a, b) in iv {
            prop_assert!(a < b);
        }
        prop_assert!(iv.iter().filter(|p| p.0 == -INF).count() <= 1);
        prop_assert!(iv.iter().filter(|p| p.1 == INF).count() <= 1);
    }

    #[test]
    fn triangle_property(e in any_set(), f in any_set()) {
        let d = e.symm_diff(&f).measure();
        prop_assert!((e.measure() - f.measure()).abs() <= d + 1e-12);
        let split = e.difference(&f).measure() + f.difference(&e).measure();
        prop_assert!((d - split).abs() <= 1e-12);
    }

    #[test]
    fn ehrhard_preserves_measure(e in nondegenerate_set()) {
        let h = ehrhard_symmetrize(&e).unwrap();
        prop_assert_eq!(h.orientation, Orientation::Left);
        prop_assert!((h.measure() - e.measure()).abs() <= 1e-12);
    }

    #[test]
    fn asymmetry_range_and_minimality(e in nondegenerate_set()) {
        let a = asymmetry(&e).unwrap();
        let m = e.measure();
        prop_assert!(a.value >= 0.0 && a.value <= 2.0);
        prop_assert!((a.halfline.measure() - m).abs() <= 1e-12);
        let r = phi_inv(m).unwrap();
        for h in [GaussianSet::left_halfline(r), GaussianSet::right_halfline(-r)] {
            prop_assert!(a.value <= e.symm_diff(&h).measure() / m + 1e-14);
        }
    }

    // Complement then reflection sends the best halfline of E to one for the
    // new set with the same symmetric difference. The ratio is normalized by
    // the set's own measure, so γ(E Δ H*) is the invariant quantity.
    #[test]
    fn asymmetry_under_complement_and_reflection(e in nondegenerate_set()) {
        let m = e.measure();
        let dual = e.complement().reflect();
        let a = asymmetry(&e).unwrap().value;
        let b = asymmetry(&dual).unwrap().value;
        prop_assert!((a * m - b * dual.measure()).abs() <= 1e-12);
    }

    #[test]
    fn asymmetry_reflection_invariant(e in nondegenerate_set()) {
        let a = asymmetry(&e).unwrap().value;
        let b = asymmetry(&e.reflect()).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12);
    }
}
