//! Chart-based flow integration with section-event detection.
//!
//! The integrator is an adaptive embedded Dormand-Prince 5(4) pair. Each
//! accepted step is scanned for sign changes of the section at interior
//! points (re-integrated exactly, so no interpolation error enters), and each
//! sign-change cell is localized in time by bisection with the same
//! error-controlled stepper. Crossings closer together than
//! `max_step / 8` can still merge; pick `max_step` accordingly for fast
//! sections.
//!
//! Coordinates declared periodic by the field are wrapped into `[0, period)`
//! after every accepted step. Section functions must therefore be branch-safe:
//! invariant under shifting any periodic coordinate by its period (use the
//! sine of an angular defect, never the raw angle). A section whose zero set
//! is larger than the surface of interest (the sine of a defect vanishes on
//! two parallel loops) can restrict to the right component with an
//! `on_surface` predicate evaluated at the localized crossing point.

use crate::error::{Error, Result};
use crate::linalg::solve_in_place;

/// A three-dimensional coordinate chart carrying a vector field.
///
/// `velocity` must be reentrant: independent trajectories may be integrated
/// concurrently.
pub trait ChartField: Sync {
    /// Field evaluation. Must be invariant under shifting any coordinate
    /// declared periodic by its period.
    fn velocity(&self, x: &[f64; 3]) -> [f64; 3];

    /// Whether a point lies in the chart; integration stops at the last
    /// interior step when a trajectory leaves.
    fn in_chart(&self, _x: &[f64; 3]) -> bool {
        true
    }

    /// Per-coordinate periods for cyclic coordinates (`None` = not periodic).
    fn coordinate_periods(&self) -> [Option<f64>; 3] {
        [None, None, None]
    }
}

/// Scalar section with an optional surface-membership predicate.
pub struct Section<'a> {
    pub value: &'a (dyn Fn(&[f64; 3]) -> f64 + Sync),
    pub on_surface: Option<&'a (dyn Fn(&[f64; 3]) -> bool + Sync)>,
}

impl<'a> Section<'a> {
    pub fn new(value: &'a (dyn Fn(&[f64; 3]) -> f64 + Sync)) -> Self {
        Self {
            value,
            on_surface: None,
        }
    }

    pub fn with_filter(
        value: &'a (dyn Fn(&[f64; 3]) -> f64 + Sync),
        on_surface: &'a (dyn Fn(&[f64; 3]) -> bool + Sync),
    ) -> Self {
        Self {
            value,
            on_surface: Some(on_surface),
        }
    }
}

/// Integration tolerances and limits.
#[derive(Debug, Clone)]
pub struct IntegratorConfig {
    /// Relative per-step error tolerance.
    pub rel_tol: f64,
    /// Absolute per-step error tolerance.
    pub abs_tol: f64,
    /// Event times are bisected to this accuracy; events closer than this are
    /// merged.
    pub event_time_tol: f64,
    /// Hard cap on the step size. `None` caps at `duration / 256`. Event
    /// scanning resolves sign changes down to an eighth of the step.
    pub max_step: Option<f64>,
    pub max_steps: usize,
    /// Record `(t, point, section)` at every accepted step.
    pub record_samples: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            event_time_tol: 1e-10,
            max_step: None,
            max_steps: 20_000_000,
            record_samples: false,
        }
    }
}

/// A localized transversal crossing of the section.
#[derive(Debug, Clone)]
pub struct SectionEvent {
    pub time: f64,
    pub point: [f64; 3],
    /// Sign of d(section)/dt at the crossing.
    pub sign: i8,
}

/// One recorded trajectory sample.
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub time: f64,
    pub point: [f64; 3],
    pub section: f64,
}

/// Result of one integration run.
#[derive(Debug, Clone)]
pub struct TrajectorySummary {
    pub total_time: f64,
    /// Signed sum of the kept events.
    pub crossing_count: i64,
    pub events: Vec<SectionEvent>,
    pub end_point: [f64; 3],
    pub exited_chart: bool,
    pub accepted_steps: usize,
    pub samples: Vec<Sample>,
}

impl TrajectorySummary {
    pub fn empirical_rate(&self) -> f64 {
        if self.total_time > 0.0 {
            self.crossing_count as f64 / self.total_time
        } else {
            0.0
        }
    }
}

/// Interior scan points per accepted step for section sign changes; crossings
/// closer than `max_step / EVENT_SCAN_POINTS` may still merge.
const EVENT_SCAN_POINTS: usize = 8;

// Dormand-Prince 5(4) coefficients.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(y: &[f64; 3], h: f64, coeffs: &[f64], ks: &[[f64; 3]]) -> [f64; 3] {
    let mut out = *y;
    for (c, k) in coeffs.iter().zip(ks) {
        if *c == 0.0 {
            continue;
        }
        for i in 0..3 {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One embedded step. Returns `(y5, error_norm, k_last)`.
fn dp54_step<F: ChartField + ?Sized>(
    field: &F,
    y: &[f64; 3],
    k1: &[f64; 3],
    h: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> ([f64; 3], f64, [f64; 3]) {
    let k2 = field.velocity(&axpy(y, h, &A2, &[*k1]));
    let k3 = field.velocity(&axpy(y, h, &A3, &[*k1, k2]));
    let k4 = field.velocity(&axpy(y, h, &A4, &[*k1, k2, k3]));
    let k5 = field.velocity(&axpy(y, h, &A5, &[*k1, k2, k3, k4]));
    let k6 = field.velocity(&axpy(y, h, &A6, &[*k1, k2, k3, k4, k5]));
    let stages = [*k1, k2, k3, k4, k5, k6];
    let y5 = axpy(y, h, &B5, &stages);
    let k7 = field.velocity(&y5);
    let all = [*k1, k2, k3, k4, k5, k6, k7];
    let y4 = axpy(y, h, &B4, &all);
    let mut err = 0.0;
    for i in 0..3 {
        let scale = abs_tol + rel_tol * y[i].abs().max(y5[i].abs());
        let e = (y5[i] - y4[i]) / scale;
        err += e * e;
    }
    (y5, (err / 3.0).sqrt(), k7)
}

fn wrap_coords<F: ChartField + ?Sized>(field: &F, y: &mut [f64; 3]) {
    for (i, period) in field.coordinate_periods().iter().enumerate() {
        if let Some(p) = period {
            y[i] = y[i].rem_euclid(*p);
        }
    }
}

/// Error-controlled integration over a fixed time span, no event handling.
fn advance<F: ChartField + ?Sized>(
    field: &F,
    start: &[f64; 3],
    dt: f64,
    cfg: &IntegratorConfig,
) -> Result<[f64; 3]> {
    if dt == 0.0 {
        return Ok(*start);
    }
    let mut y = *start;
    let mut t = 0.0;
    let mut h = dt.min(cfg.max_step.unwrap_or(dt));
    let mut k1 = field.velocity(&y);
    let mut steps = 0usize;
    while t < dt {
        h = h.min(dt - t);
        if h < 1e-15 * dt.max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let (y5, err, k7) = dp54_step(field, &y, &k1, h, cfg.rel_tol, cfg.abs_tol);
        if err <= 1.0 {
            t += h;
            y = y5;
            // the velocity contract makes k7 valid for the wrapped state too
            wrap_coords(field, &mut y);
            k1 = k7;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if let Some(cap) = cfg.max_step {
            h = h.min(cap);
        }
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::BudgetExceeded(format!(
                "advance exceeded {} steps",
                cfg.max_steps
            )));
        }
    }
    Ok(y)
}

/// Integrate the field from `start` for `duration`, detecting transversal
/// crossings of `section`.
pub fn integrate<F: ChartField + ?Sized>(
    field: &F,
    start: &[f64; 3],
    duration: f64,
    section: Option<&Section>,
    cfg: &IntegratorConfig,
) -> Result<TrajectorySummary> {
    if !(duration > 0.0) {
        return Err(Error::InvalidInput(format!(
            "duration must be positive, got {duration}"
        )));
    }
    if !field.in_chart(start) {
        return Err(Error::InvalidInput("start point is outside the chart".into()));
    }
    let max_step = cfg.max_step.unwrap_or(duration / 256.0);
    let eval = |y: &[f64; 3]| section.map(|s| (s.value)(y)).unwrap_or(0.0);

    let mut y = *start;
    wrap_coords(field, &mut y);
    let mut t = 0.0;
    let mut g = eval(&y);
    let mut k1 = field.velocity(&y);
    let mut h = max_step.min(duration);
    let mut events: Vec<SectionEvent> = Vec::new();
    let mut samples = Vec::new();
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    let mut exited = false;
    if cfg.record_samples {
        samples.push(Sample {
            time: t,
            point: y,
            section: g,
        });
    }

    while t < duration {
        h = h.min(duration - t).min(max_step);
        if h < 1e-15 * duration.max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let (y5, err, _) = dp54_step(field, &y, &k1, h, cfg.rel_tol, cfg.abs_tol);
        if err <= 1.0 {
            if !field.in_chart(&y5) {
                exited = true;
                break;
            }
            let mut y_new = y5;
            wrap_coords(field, &mut y_new);
            let g_new = eval(&y_new);
            if let Some(sec) = section {
                // scan the step at interior points so that crossing pairs
                // cannot cancel between the endpoints; the scan states are
                // re-integrated exactly, and each sign-change cell is then
                // bisected
                let scan = EVENT_SCAN_POINTS;
                let mut ta = t;
                let mut ya = y;
                let mut ga = g;
                for j in 1..=scan {
                    let tb = t + h * j as f64 / scan as f64;
                    let (yb, gb) = if j == scan {
                        (y_new, g_new)
                    } else {
                        let mut yb = advance(field, &ya, tb - ta, cfg)?;
                        wrap_coords(field, &mut yb);
                        let gb = eval(&yb);
                        (yb, gb)
                    };
                    if ga * gb < 0.0 || (gb == 0.0 && ga != 0.0) {
                        let (te, pe) = locate_event(field, &ya, ta, tb, ga, gb, sec, cfg)?;
                        let keep = sec.on_surface.map(|f| f(&pe)).unwrap_or(true);
                        let duplicate = events
                            .last()
                            .is_some_and(|prev| (te - prev.time).abs() <= cfg.event_time_tol);
                        if keep && !duplicate {
                            events.push(SectionEvent {
                                time: te,
                                point: pe,
                                sign: if ga < 0.0 { 1 } else { -1 },
                            });
                        }
                    }
                    ta = tb;
                    ya = yb;
                    ga = gb;
                }
            }
            t += h;
            y = y_new;
            g = g_new;
            k1 = field.velocity(&y);
            accepted += 1;
            if cfg.record_samples {
                samples.push(Sample {
                    time: t,
                    point: y,
                    section: g,
                });
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        attempts += 1;
        if attempts > cfg.max_steps {
            return Err(Error::BudgetExceeded(format!(
                "integration exceeded {} step attempts",
                cfg.max_steps
            )));
        }
    }

    let crossing_count = events.iter().map(|e| e.sign as i64).sum();
    Ok(TrajectorySummary {
        total_time: t,
        crossing_count,
        events,
        end_point: y,
        exited_chart: exited,
        accepted_steps: accepted,
        samples,
    })
}

/// Bisect a sign change of the section inside `[t_lo, t_hi]` down to
/// `event_time_tol`, keeping the left endpoint state current.
fn locate_event<F: ChartField + ?Sized>(
    field: &F,
    y_lo: &[f64; 3],
    t_lo: f64,
    t_hi: f64,
    g_lo: f64,
    g_hi: f64,
    section: &Section,
    cfg: &IntegratorConfig,
) -> Result<(f64, [f64; 3])> {
    debug_assert!(g_lo * g_hi < 0.0 || g_hi == 0.0);
    let mut ta = t_lo;
    let mut ya = *y_lo;
    let mut ga = g_lo;
    let mut tb = t_hi;
    if g_hi == 0.0 {
        // endpoint landed exactly on the section
        let mut y = advance(field, y_lo, t_hi - t_lo, cfg)?;
        wrap_coords(field, &mut y);
        return Ok((t_hi, y));
    }
    for _ in 0..200 {
        if tb - ta <= cfg.event_time_tol {
            break;
        }
        let tm = 0.5 * (ta + tb);
        let mut ym = advance(field, &ya, tm - ta, cfg)?;
        wrap_coords(field, &mut ym);
        let gm = (section.value)(&ym);
        if gm == 0.0 {
            return Ok((tm, ym));
        }
        if (gm > 0.0) == (ga > 0.0) {
            ta = tm;
            ya = ym;
            ga = gm;
        } else {
            tb = tm;
        }
    }
    let te = 0.5 * (ta + tb);
    let mut ye = advance(field, &ya, te - ta, cfg)?;
    wrap_coords(field, &mut ye);
    Ok((te, ye))
}

/// Integrate until the section first crosses zero; returns `(time, point)`.
///
/// The section value must change sign along the trajectory within `max_time`.
pub fn integrate_to_section<F: ChartField + ?Sized>(
    field: &F,
    start: &[f64; 3],
    max_time: f64,
    section: &Section,
    cfg: &IntegratorConfig,
) -> Result<(f64, [f64; 3])> {
    let summary = integrate(field, start, max_time, Some(section), cfg)?;
    summary
        .events
        .first()
        .map(|e| (e.time, e.point))
        .ok_or_else(|| {
            Error::NoConvergence {
                what: "section crossing".into(),
                iterations: summary.accepted_steps,
                residual: f64::NAN,
            }
        })
}

/// Fixed-step integration with the same 5th-order update; used by the order
/// checks.
pub fn integrate_fixed_step<F: ChartField + ?Sized>(
    field: &F,
    start: &[f64; 3],
    duration: f64,
    h: f64,
) -> [f64; 3] {
    let n = (duration / h).round() as usize;
    let h = duration / n as f64;
    let mut y = *start;
    for _ in 0..n {
        let k1 = field.velocity(&y);
        let (y5, _, _) = dp54_step(field, &y, &k1, h, 1.0, 1.0);
        y = y5;
    }
    y
}

/// Settings for the periodic-orbit Newton refiner.
#[derive(Debug, Clone)]
pub struct OrbitRefineConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub fd_step: f64,
    pub integrator: IntegratorConfig,
}

impl Default for OrbitRefineConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 30,
            fd_step: 1e-7,
            integrator: IntegratorConfig {
                max_step: Some(0.05),
                ..IntegratorConfig::default()
            },
        }
    }
}

fn periodic_diff(a: f64, b: f64, period: Option<f64>) -> f64 {
    let d = a - b;
    match period {
        Some(p) => d - p * (d / p).round(),
        None => d,
    }
}

/// Refine a near-periodic seed to a fixed point of the time-`P` flow map.
///
/// Unknowns are the point and the period; a phase condition (orthogonality to
/// the seed velocity) removes the drift along the orbit. The Jacobian is
/// finite-difference. Returns the refined point and period.
pub fn refine_periodic_orbit<F: ChartField + ?Sized>(
    field: &F,
    seed: &[f64; 3],
    approx_period: f64,
    cfg: &OrbitRefineConfig,
) -> Result<([f64; 3], f64)> {
    if !(approx_period > 0.0) {
        return Err(Error::InvalidInput(format!(
            "approximate period must be positive, got {approx_period}"
        )));
    }
    let periods = field.coordinate_periods();
    let v_seed = field.velocity(seed);
    let residual_map = |y: &[f64; 3], p: f64| -> Result<[f64; 4]> {
        let fy = advance(field, y, p, &cfg.integrator)?;
        let mut r = [0.0; 4];
        for i in 0..3 {
            r[i] = periodic_diff(fy[i], y[i], periods[i]);
        }
        r[3] = (0..3).map(|i| (y[i] - seed[i]) * v_seed[i]).sum();
        Ok(r)
    };

    let mut y = *seed;
    let mut p = approx_period;
    for _ in 0..cfg.max_iter {
        let r = residual_map(&y, p)?;
        let defect = r[0].abs().max(r[1].abs()).max(r[2].abs());
        if defect <= cfg.tol && r[3].abs() <= cfg.tol * (1.0 + p) {
            let mut out = y;
            wrap_coords(field, &mut out);
            return Ok((out, p));
        }
        // finite-difference Jacobian in (y, P)
        let mut jac = [0.0f64; 16];
        for col in 0..4 {
            let mut yp = y;
            let mut pp = p;
            let h = if col < 3 {
                let h = cfg.fd_step * (1.0 + y[col].abs());
                yp[col] += h;
                h
            } else {
                let h = cfg.fd_step * (1.0 + p.abs());
                pp += h;
                h
            };
            let rp = residual_map(&yp, pp)?;
            for row in 0..4 {
                jac[row * 4 + col] = (rp[row] - r[row]) / h;
            }
        }
        let mut rhs = [-r[0], -r[1], -r[2], -r[3]];
        let step = solve_in_place(4, &mut jac, &mut rhs, 1e-13).ok_or_else(|| {
            Error::Degenerate("(near-)degenerate orbit: singular flow-map Jacobian".into())
        })?;
        y[0] += step[0];
        y[1] += step[1];
        y[2] += step[2];
        p += step[3];
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::NoConvergence {
                what: "periodic orbit refinement".into(),
                iterations: cfg.max_iter,
                residual: f64::NAN,
            });
        }
    }
    let r = residual_map(&y, p)?;
    Err(Error::NoConvergence {
        what: "periodic orbit refinement".into(),
        iterations: cfg.max_iter,
        residual: r[0].abs().max(r[1].abs()).max(r[2].abs()),
    })
}

/// Crossing frequency of a trajectory: `count / action` when the sample is a
/// closed orbit of known action, otherwise `count / total_time` for a long
/// non-closed sample (an extension beyond closed orbits, flagged as empirical
/// in reports).
pub fn empirical_frequency(summary: &TrajectorySummary, action: Option<f64>) -> Result<f64> {
    match action {
        Some(t) if t > 0.0 => Ok(summary.crossing_count as f64 / t),
        Some(t) => Err(Error::InvalidInput(format!(
            "action must be positive, got {t}"
        ))),
        None => Ok(summary.empirical_rate()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TAU: f64 = std::f64::consts::TAU;

    /// Rigid rotation in the (x1, x2) plane at angular velocity `w`.
    struct Rotation {
        w: f64,
    }

    impl ChartField for Rotation {
        fn velocity(&self, x: &[f64; 3]) -> [f64; 3] {
            [-self.w * x[1], self.w * x[0], 0.0]
        }
    }

    struct Constant;

    impl ChartField for Constant {
        fn velocity(&self, _x: &[f64; 3]) -> [f64; 3] {
            [1.0, 0.0, 0.0]
        }
    }

    #[test]
    fn order_five_convergence_on_rotation() {
        let field = Rotation { w: 1.0 };
        let start = [1.0, 0.0, 0.0];
        let t = 2.0_f64;
        let exact = [t.cos(), t.sin(), 0.0];
        let err = |h: f64| {
            let y = integrate_fixed_step(&field, &start, t, h);
            (0..3)
                .map(|i| (y[i] - exact[i]).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        let e1 = err(0.1);
        let e2 = err(0.05);
        // 5th order: halving h should gain a factor near 32
        assert!(e2 * 16.0 < e1, "e1 = {e1:.3e}, e2 = {e2:.3e}");
    }

    #[test]
    fn tightening_tolerance_reduces_endpoint_error() {
        let field = Rotation { w: 1.3 };
        let start = [1.0, 0.0, 0.0];
        let t = 5.0_f64;
        let exact = [(1.3 * t).cos(), (1.3 * t).sin(), 0.0];
        let err_at = |rel: f64| {
            let cfg = IntegratorConfig {
                rel_tol: rel,
                abs_tol: rel * 1e-2,
                ..IntegratorConfig::default()
            };
            let s = integrate(&field, &start, t, None, &cfg).unwrap();
            (0..3)
                .map(|i| (s.end_point[i] - exact[i]).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        assert!(err_at(1e-12) <= err_at(1e-6));
        assert!(err_at(1e-12) < 1e-9);
    }

    #[test]
    fn constant_field_has_no_crossings_of_fixed_transverse_section() {
        let field = Constant;
        let section_fn = |x: &[f64; 3]| (x[1] + 0.5).sin();
        let section = Section::new(&section_fn);
        let s = integrate(&field, &[0.0, 0.0, 0.0], 10.0, Some(&section), &IntegratorConfig::default())
            .unwrap();
        assert_eq!(s.crossing_count, 0);
        assert!(s.events.is_empty());
    }

    #[test]
    fn rotation_events_are_localized_and_signed() {
        // crossings of the ray {x2 = 0, x1 > 0}: once per turn
        let field = Rotation { w: TAU };
        let section_fn = |x: &[f64; 3]| x[1];
        let filter = |x: &[f64; 3]| x[0] > 0.0;
        let section = Section::with_filter(&section_fn, &filter);
        let s = integrate(
            &field,
            &[1.0, -0.1, 0.0],
            3.0,
            Some(&section),
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert_eq!(s.crossing_count, 3);
        for (i, ev) in s.events.iter().enumerate() {
            assert_eq!(ev.sign, 1);
            assert!((section_fn(&ev.point)).abs() < 1e-8);
            // first crossing shortly after start, then once per unit time
            let expected = 0.1f64.atan2(1.0) / TAU + i as f64;
            assert_relative_eq!(ev.time, expected, epsilon = 1e-8);
        }
    }

    #[test]
    fn chart_exit_sets_flag() {
        struct Outward;
        impl ChartField for Outward {
            fn velocity(&self, _x: &[f64; 3]) -> [f64; 3] {
                [1.0, 0.0, 0.0]
            }
            fn in_chart(&self, x: &[f64; 3]) -> bool {
                x[0] < 1.0
            }
        }
        let s = integrate(&Outward, &[0.0, 0.0, 0.0], 10.0, None, &IntegratorConfig::default())
            .unwrap();
        assert!(s.exited_chart);
        assert!(s.total_time < 1.5);
        assert!(s.end_point[0] < 1.0);
    }

    #[test]
    fn blow_up_reports_step_underflow() {
        struct BlowUp;
        impl ChartField for BlowUp {
            fn velocity(&self, x: &[f64; 3]) -> [f64; 3] {
                let d = 1.0 - x[0];
                [1.0 / (d * d), 0.0, 0.0]
            }
        }
        let got = integrate(&BlowUp, &[0.0, 0.0, 0.0], 2.0, None, &IntegratorConfig::default());
        assert!(matches!(
            got,
            Err(Error::StepSizeUnderflow { .. }) | Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn refine_rotation_center_returns_immediately() {
        // the origin is an equilibrium: residual is already zero, period kept
        let field = Rotation { w: 2.0 };
        let (point, period) =
            refine_periodic_orbit(&field, &[0.0, 0.0, 0.0], 1.7, &OrbitRefineConfig::default())
                .unwrap();
        assert_eq!(point, [0.0, 0.0, 0.0]);
        assert_eq!(period, 1.7);
    }

    #[test]
    fn empirical_frequency_contract() {
        let summary = TrajectorySummary {
            total_time: 10.0,
            crossing_count: 4,
            events: vec![],
            end_point: [0.0; 3],
            exited_chart: false,
            accepted_steps: 1,
            samples: vec![],
        };
        assert_relative_eq!(empirical_frequency(&summary, Some(2.0)).unwrap(), 2.0);
        assert_relative_eq!(empirical_frequency(&summary, None).unwrap(), 0.4);
        assert!(empirical_frequency(&summary, Some(0.0)).is_err());
    }
}
