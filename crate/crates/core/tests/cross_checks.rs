//! Consistency checks spanning several modules.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reeb_lab::ellipsoid::{Ellipsoid, PqSurface};
use reeb_lab::flow::{integrate, IntegratorConfig, Section};
use reeb_lab::inflation::{self, TubeChart};
use reeb_lab::model::{BoundaryIncidence, SimpleOrbit};
use reeb_lab::spectrum::{self, ActionSpectrum};

const SQRT2: f64 = std::f64::consts::SQRT_2;
const TAU: f64 = std::f64::consts::TAU;

#[test]
fn straightened_annulus_feeds_a_consistent_tube() {
    // read the conormal winding off a wiggled annulus, then check that the
    // resulting tube's strand family is crossed at the intersection-number
    // rate m * q * rot_sigma per orbit period
    let rot_tau = SQRT2;
    let vn = inflation::make_very_nice(
        Box::new(|t: f64, _r: f64| 0.2 + t + 0.04 * (TAU * t).sin()),
        1,
        1.0,
        0.5,
        0.2,
    )
    .unwrap();
    assert_eq!(vn.p, 1);
    let tube = TubeChart::new(1.0, rot_tau, 0.5, vn.p, 1, 0.2).unwrap();

    // the model vocabulary gives the expected crossing count per unit time
    let orbit = SimpleOrbit::new("core", 1.0, rot_tau, true).unwrap();
    let incidence = BoundaryIncidence::new(orbit, 1, 1, vn.p).unwrap();
    let per_period = incidence.intersection_number().unwrap();
    assert!((per_period - (rot_tau - 1.0)).abs() < 1e-14);

    let field = tube.model_field();
    let value = tube.strand_defect();
    let filter = tube.strand_filter();
    let section = Section::with_filter(&value, &filter);
    let duration = 80.0;
    let summary = integrate(
        &field,
        &[0.0, 0.2, 1.3],
        duration,
        Some(&section),
        &IntegratorConfig::default(),
    )
    .unwrap();
    let expected = per_period * duration / tube.period;
    let count = summary.crossing_count as f64;
    assert!(
        (count - expected).abs() <= 1.0,
        "count {count} vs expected {expected}"
    );
    // positively transverse surface: every crossing is positive
    assert!(summary.events.iter().all(|ev| ev.sign == 1));
}

#[test]
fn ellipsoid_actions_drive_the_spectrum_diagnostics() {
    let e = Ellipsoid::new(1.0, SQRT2, true).unwrap();
    let (g1, g2) = e.orbits().unwrap();
    let mut spec = ActionSpectrum::new(vec![g1.action, g2.action])
        .unwrap()
        .with_volume_hint(e.volume());
    let diags = spectrum::weyl_diagnostics(&mut spec, &[2000]).unwrap();
    assert!(
        (diags[0].normalized - 1.0).abs() < 0.05,
        "normalized {} at k=2000",
        diags[0].normalized
    );
}

#[test]
fn disjoint_union_matches_brute_force_on_random_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10 {
        let mut a = ActionSpectrum::new(vec![
            rng.gen_range(0.4..2.5),
            rng.gen_range(0.4..2.5),
        ])
        .unwrap();
        let mut b = ActionSpectrum::new(vec![
            rng.gen_range(0.4..2.5),
            rng.gen_range(0.4..2.5),
        ])
        .unwrap();
        let pa = a.prefix(30).unwrap().to_vec();
        let pb = b.prefix(30).unwrap().to_vec();
        for k in [0usize, 7, 18, 30] {
            let mut specs = [a.clone(), b.clone()];
            let dp = spectrum::disjoint_union_value(&mut specs, k).unwrap();
            let brute = (0..=k)
                .map(|i| pa[i] + pb[k - i])
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(dp, brute);
        }
    }
}

#[test]
fn inflation_budget_agrees_with_the_ellipsoid_threshold() {
    // on the ellipsoid disk page, every orbit sits exactly at area/volume, so
    // the budget inequality admits no positive deformation when F matches the
    // threshold and opens up as soon as F drops below it
    let e = Ellipsoid::new(1.0, SQRT2, true).unwrap();
    let s = PqSurface::disk();
    let record = reeb_lab::ellipsoid::pq_surface_data(&e, &s).unwrap();
    let threshold = record.area / e.volume();
    let saturated =
        inflation::inflation_budget(threshold, 1e-12, 0.05, record.area, e.volume()).unwrap();
    assert!(saturated.delta_max.is_none());
    let slack = inflation::inflation_budget(
        0.5 * threshold,
        1e-3,
        0.05,
        record.area,
        e.volume(),
    )
    .unwrap();
    assert!(slack.admissible);
    assert!(slack.delta_max.unwrap() > 0.05);
}
