mod common;

use carleson::hankel::{positivity_certificate, section_from_moments, PositivityVerdict};
use carleson::measure::*;
use common::*;
use proptest::prelude::*;

type Generated = (DiscMeasure, Vec<(f64, f64)>, Option<(f64, f64)>);

/// Atoms in `(lo, hi)` plus an optional Lebesgue piece on a subinterval.
fn disc_measure(lo: f64, hi: f64) -> impl Strategy<Value = Generated> {
    (atoms(lo, hi, 4), prop::option::of((lo..hi, lo..hi))).prop_map(|(a, piece)| {
        let piece = piece.map(|(x, y)| (x.min(y), x.max(y))).filter(|(x, y)| y - x > 1e-3);
        let mut m = DiscMeasure::atomic(&a).unwrap();
        if let Some((x, y)) = piece {
            let leb = DiscMeasure::lebesgue(x, y).unwrap();
            m = DiscMeasure::new(m.atoms().to_vec(), leb.pieces().to_vec()).unwrap();
        }
        (m, a, piece)
    })
}

fn oracle_moment(a: &[(f64, f64)], piece: Option<(f64, f64)>, j: usize) -> f64 {
    let atoms: f64 = a.iter().map(|(x, m)| m * x.powi(j as i32)).sum();
    atoms + piece.map_or(0.0, |(x, y)| lebesgue_moment(x, y, j))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moments_match_closed_forms((mu, a, piece) in disc_measure(-0.99, 0.99)) {
        for j in 0..40 {
            let want = oracle_moment(&a, piece, j);
            let got = mu.moment(j).unwrap();
            let scale: f64 = a.iter().map(|(_, m)| m).sum::<f64>() + 2.0;
            prop_assert!((got - want).abs() <= 1e-13 * scale, "j={j}: {got} vs {want}");
        }
    }

    #[test]
    fn moment_sections_are_positive((mu, _, _) in disc_measure(-0.99, 0.99), n in 1usize..=64) {
        let c = mu.moments(2 * n - 1).unwrap();
        let cert = positivity_certificate(&section_from_moments(&c, n).unwrap());
        prop_assert_eq!(cert.verdict, PositivityVerdict::Positive, "{:?}", cert);
    }

    #[test]
    fn moments_decrease_on_unit_interval((mu, _, _) in disc_measure(0.0, 0.99)) {
        let c = mu.moments(200).unwrap();
        for j in 0..199 {
            prop_assert!(c.values[j + 1] <= c.values[j], "c_{} = {} > c_{} = {}", j + 1, c.values[j + 1], j, c.values[j]);
        }
    }

    /// `int x^j dmu = mu([0,1]) f(0) + int_0^1 mu([t,1]) j t^{j-1} dt`.
    #[test]
    fn integration_by_parts_on_unit_interval((mu, a, piece) in disc_measure(0.0, 0.99), j in 1usize..12) {
        let direct = mu.moment(j).unwrap();
        let tail = |t: f64| mu.mass_between(t, 1.0).unwrap() * j as f64 * t.powi(j as i32 - 1);
        let mut breaks: Vec<f64> = a.iter().map(|(x, _)| *x).collect();
        if let Some((x, y)) = piece {
            breaks.extend([x, y]);
        }
        breaks.extend([0.0, 1.0]);
        breaks.sort_by(f64::total_cmp);
        let by_parts: f64 = breaks.windows(2).map(|w| gauss5(tail, w[0], w[1], 4)).sum();
        prop_assert!((by_parts - direct).abs() <= 1e-8 * direct, "{by_parts} vs {direct}");
    }

    /// The same identity on `[-1, 1]`, measured against the size of the two
    /// terms, since they cancel when the mass sits near the origin.
    #[test]
    fn integration_by_parts_on_full_interval((mu, a, piece) in disc_measure(-0.99, 0.99), j in 1usize..12) {
        let direct = mu.moment(j).unwrap();
        let boundary = mu.total_mass().unwrap() * (-1.0f64).powi(j as i32);
        let tail = |t: f64| mu.mass_between(t, 1.0).unwrap() * j as f64 * t.powi(j as i32 - 1);
        let mut breaks: Vec<f64> = a.iter().map(|(x, _)| *x).collect();
        if let Some((x, y)) = piece {
            breaks.extend([x, y]);
        }
        breaks.extend([-1.0, 1.0]);
        breaks.sort_by(f64::total_cmp);
        let by_parts = boundary + breaks.windows(2).map(|w| gauss5(tail, w[0], w[1], 4)).sum::<f64>();
        let tail_size: f64 = breaks.windows(2).map(|w| gauss5(|t| tail(t).abs(), w[0], w[1], 4)).sum();
        let scale = boundary.abs() + tail_size;
        prop_assert!((by_parts - direct).abs() <= 1e-8 * scale, "{by_parts} vs {direct}");
    }

    #[test]
    fn finite_widom_constants_give_finite_rho(a in atoms(0.01, 50.0, 4), leb in prop::option::of((0.0..5.0f64, 0.1..5.0f64))) {
        let base = HalfPlaneMeasure::atomic(&a).unwrap();
        let mu = match leb {
            Some((lo, len)) => HalfPlaneMeasure::new(base.atoms().to_vec(), HalfPlaneMeasure::lebesgue(lo, lo + len).unwrap().pieces().to_vec()).unwrap(),
            None => base,
        };
        let r = widom_check(&Measure::HalfPlane(mu.clone()), &GridSpec::default()).unwrap();
        prop_assert!(r.beta.is_finite() && r.gamma.is_finite());
        prop_assert!(r.rho_total.is_finite());
        prop_assert_eq!(r.verdict, WidomVerdict::Bounded);
        let rho_oracle: f64 = a.iter().map(|(x, m)| m / (1.0 + x * x)).sum::<f64>()
            + leb.map_or(0.0, |(lo, len)| (lo + len).atan() - lo.atan());
        prop_assert!((r.rho_total - rho_oracle).abs() <= 1e-10 * rho_oracle, "{} vs {}", r.rho_total, rho_oracle);
    }

    #[test]
    fn pushforward_preserves_atom_moments(a in atoms(0.01, 50.0, 4), j in 0usize..16) {
        let mu = HalfPlaneMeasure::atomic(&a).unwrap();
        let nu = mu.cayley_pushforward();
        let want: f64 = a.iter().map(|(l, m)| {
            let x = (l - 1.0) / (l + 1.0);
            m * 2.0 / ((1.0 + l) * (1.0 + l)) * x.powi(j as i32)
        }).sum();
        let got = nu.moment(j).unwrap();
        prop_assert!((got - want).abs() <= 1e-13 * nu.total_mass().unwrap());
    }

    #[test]
    fn spec_round_trip(a in atoms(-0.99, 0.99, 4)) {
        let mu = DiscMeasure::atomic(&a).unwrap();
        let spec = MeasureSpec::from(&mu);
        let back = MeasureSpec::from_json(&spec.to_json()).unwrap().into_measure().unwrap();
        prop_assert_eq!(back, Measure::Disc(mu));
    }
}

#[test]
fn rho_oracle_matches_definition() {
    let mu = HalfPlaneMeasure::lebesgue(0.0, 1.0).unwrap();
    assert!((mu.rho_total().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-13);
}

#[test]
fn moment_examples() {
    let leb = DiscMeasure::lebesgue(0.0, 1.0).unwrap();
    assert_eq!(leb.moments(3).unwrap().values, vec![1.0, 0.5, 1.0 / 3.0]);
    let atom = DiscMeasure::atomic(&[(0.5, 1.0)]).unwrap();
    assert!((atom.moment(2).unwrap() - 0.25).abs() < 1e-16);
    assert!(matches!(
        leb.moment(MOMENT_CAP + 1),
        Err(carleson::Error::MomentCap { .. })
    ));
}

#[test]
fn widom_examples() {
    let d1 = HalfPlaneMeasure::atomic(&[(1.0, 1.0)]).unwrap();
    let r = widom_check(&Measure::HalfPlane(d1), &GridSpec::default()).unwrap();
    assert_eq!((r.beta, r.gamma), (0.5, 0.5));
    assert_eq!(r.verdict, WidomVerdict::Bounded);
    let spec = r#"{"domain":"disc","densities":[{"kind":"power","coeff":1.0,"exponent":-0.5,"base":"one_minus_x","support":[-1.0,1.0]}]}"#;
    let mu = MeasureSpec::from_json(spec).unwrap().into_measure().unwrap();
    let r = widom_check(&mu, &GridSpec::default()).unwrap();
    assert_eq!(r.verdict, WidomVerdict::Unbounded);
    assert!(r.require_bounded().is_err());
}
