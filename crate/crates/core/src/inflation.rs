//! Boundary-tube normal form and exponential inflation of a contact form in a
//! slab over a surface.
//!
//! The deformation multiplies the contact form by `exp(delta_bar * zeta(s) *
//! beta_Sigma)` on the flow slab `[0, s0] x int(Sigma)`, where `s` is flow
//! time off the surface, `zeta` is a symmetric plateau bump in `s`, and
//! `beta_Sigma` cuts the deformation off inside the boundary tubes. The scale
//! `delta_bar` is calibrated so that the slab traversal time becomes exactly
//! `s0 + delta`; orbit actions then shift by `delta` per crossing.
//!
//! Two chart models carry the deformed Reeb field in closed form: the tube
//! slab `(s, t_tilde, r)` over a boundary annulus, and the interior slab
//! `(s, x, y)` over a surface piece with a radial Liouville field. Everything
//! here is checked numerically: the contact identities by finite-difference
//! exterior derivatives, the traversal time against quadrature, volumes
//! against closed forms and Monte-Carlo.

use crate::error::{Error, Result};
use crate::flow::{self, ChartField, IntegratorConfig, Section};
use crate::model::gcd;
use crate::quad;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

/// Quintic smoothstep on [0, 1].
fn smoothstep(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
    }
}

fn smoothstep_deriv(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        30.0 * u * u * (1.0 - u) * (1.0 - u)
    }
}

/// Symmetric plateau bump on `[0, s0]`: quintic ascent on `[s0/8, 3 s0/8]`,
/// plateau 1, mirrored descent. Satisfies `zeta(s) = zeta(s0 - s)`, vanishes
/// near both ends, and is nondecreasing on the first half.
#[derive(Debug, Clone, Copy)]
pub struct Zeta {
    pub s0: f64,
}

impl Zeta {
    pub fn new(s0: f64) -> Result<Self> {
        if !(s0 > 0.0) || !s0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "slab thickness s0 must be positive, got {s0}"
            )));
        }
        Ok(Self { s0 })
    }

    pub fn eval(&self, s: f64) -> f64 {
        let lo = self.s0 / 8.0;
        let w = self.s0 / 4.0;
        if s <= self.s0 / 2.0 {
            smoothstep((s - lo) / w)
        } else {
            smoothstep((self.s0 - s - lo) / w)
        }
    }

    pub fn deriv(&self, s: f64) -> f64 {
        let lo = self.s0 / 8.0;
        let w = self.s0 / 4.0;
        if s <= self.s0 / 2.0 {
            smoothstep_deriv((s - lo) / w) / w
        } else {
            -smoothstep_deriv((self.s0 - s - lo) / w) / w
        }
    }

    /// Mass of the step idealization with the same integral: `s0 / 2`.
    pub fn step_mass(&self) -> f64 {
        self.s0 / 2.0
    }

    /// Total measure of the two ramps, where the profile differs from a step.
    pub fn ramp_measure(&self) -> f64 {
        self.s0 / 2.0
    }
}

/// Radial cutoff on `[0, r0)`: 0 up to `r0/3`, quintic ramp on
/// `[r0/3, 5 r0/6]`, 1 beyond. The widened ramp keeps the derivative below
/// `4 / r0` (a standard smoothstep on `[r0/3, 2 r0/3]` would peak at
/// `5.625 / r0`).
#[derive(Debug, Clone, Copy)]
pub struct CutoffBeta {
    pub r0: f64,
}

impl CutoffBeta {
    pub fn new(r0: f64) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "tube radius r0 must be positive, got {r0}"
            )));
        }
        Ok(Self { r0 })
    }

    pub fn eval(&self, r: f64) -> f64 {
        let lo = self.r0 / 3.0;
        let w = self.r0 / 2.0;
        smoothstep((r - lo) / w)
    }

    pub fn deriv(&self, r: f64) -> f64 {
        let lo = self.r0 / 3.0;
        let w = self.r0 / 2.0;
        smoothstep_deriv((r - lo) / w) / w
    }

    /// Derivative bound the cutoff must respect.
    pub fn derivative_bound(&self) -> f64 {
        4.0 / self.r0
    }
}

/// Data of the inflation family: slab thickness, tube radius, the bump and
/// cutoff profiles, and the calibrated pair `(delta, delta_bar)`.
#[derive(Debug, Clone, Copy)]
pub struct InflationProfile {
    pub s0: f64,
    pub r0: f64,
    pub delta: f64,
    pub delta_bar: f64,
    pub zeta: Zeta,
    pub beta: CutoffBeta,
}

impl InflationProfile {
    pub fn new(s0: f64, r0: f64, delta: f64) -> Result<Self> {
        let zeta = Zeta::new(s0)?;
        let beta = CutoffBeta::new(r0)?;
        let delta_bar = solve_delta_bar(&zeta, delta)?;
        Ok(Self {
            s0,
            r0,
            delta,
            delta_bar,
            zeta,
            beta,
        })
    }
}

/// Solve for the unique `delta_bar >= 0` with
/// `integral_0^s0 exp(delta_bar * zeta(s)) ds = s0 + delta`.
///
/// The left side is strictly increasing in `delta_bar`, so a bisection bracket
/// always closes; one Newton step polishes the root. Accuracy target is
/// `1e-12 * s0` on the defect.
pub fn solve_delta_bar(zeta: &Zeta, delta: f64) -> Result<f64> {
    if delta < 0.0 {
        return Err(Error::InvalidInput(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let s0 = zeta.s0;
    let qtol = 1e-14 * s0.max(1.0);
    let defect = |db: f64| -> Result<f64> {
        Ok(quad::integrate(|s| (db * zeta.eval(s)).exp(), 0.0, s0, qtol)? - (s0 + delta))
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut iterations = 0;
    while defect(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if iterations > 200 {
            return Err(Error::NoConvergence {
                what: "delta_bar bracket".into(),
                iterations,
                residual: f64::NAN,
            });
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if defect(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 * (1.0 + hi) {
            break;
        }
    }
    let mut db = 0.5 * (lo + hi);
    // Newton polish: d/d(delta_bar) integral = integral zeta e^{delta_bar zeta}
    let g = defect(db)?;
    let gp = quad::integrate(|s| zeta.eval(s) * (db * zeta.eval(s)).exp(), 0.0, s0, qtol)?;
    if gp > 0.0 {
        db -= g / gp;
    }
    let residual = defect(db)?.abs();
    if residual > 1e-12 * s0.max(1.0) {
        return Err(Error::NoConvergence {
            what: "delta_bar solve".into(),
            iterations: 100,
            residual,
        });
    }
    Ok(db.max(0.0))
}

/// Closed-form `delta_bar` for the step idealization: `zeta = 1` on a set of
/// measure `mass`, zero elsewhere.
pub fn step_delta_bar(delta: f64, mass: f64) -> f64 {
    (1.0 + delta / mass).ln()
}

/// Normal-form neighborhood of a boundary orbit: flow coordinate `t` of
/// period `T`, polar `(r, theta)` on the transverse disk of radius `r0`. The
/// contact form in the chart is `dt + (r^2/2) d(theta - 2 pi rot_tau t / T)`,
/// and the surface strands sit at
/// `theta = 2 pi (theta_b + j/q + p t / (q T))`.
#[derive(Debug, Clone, Copy)]
pub struct TubeChart {
    /// Orbit period.
    pub period: f64,
    /// Rotation number in the chart trivialization.
    pub rot_tau: f64,
    pub r0: f64,
    /// Conormal winding of the surface over one `q T` circuit.
    pub p: i64,
    /// Covering degree of each boundary strand.
    pub q: i64,
    /// Angular offset of the strand family, in turns.
    pub theta_b: f64,
}

impl TubeChart {
    pub fn new(period: f64, rot_tau: f64, r0: f64, p: i64, q: i64, theta_b: f64) -> Result<Self> {
        if !(period > 0.0) || !(r0 > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tube needs positive period and radius, got ({period}, {r0})"
            )));
        }
        if q == 0 {
            return Err(Error::Degenerate("tube covering degree q = 0".into()));
        }
        if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
            return Err(Error::Degenerate(format!(
                "tube data (p, q) = ({p}, {q}) is not coprime"
            )));
        }
        Ok(Self {
            period,
            rot_tau,
            r0,
            p,
            q,
            theta_b,
        })
    }

    /// Fractional rotation number relative to the surface: `rot_tau - p/q`.
    pub fn rot_sigma(&self) -> f64 {
        self.rot_tau - self.p as f64 / self.q as f64
    }

    /// Coefficients of the undeformed normal form on `(t, r, theta)`:
    /// `(1 - pi rot_tau r^2 / T) dt + 0 dr + (r^2 / 2) dtheta`.
    pub fn nice_form_coefficients(&self, x: &[f64; 3]) -> [f64; 3] {
        let r = x[1];
        [
            1.0 - PI * self.rot_tau * r * r / self.period,
            0.0,
            0.5 * r * r,
        ]
    }

    /// The model Reeb field `d_t + (2 pi rot_tau / T) d_theta` on `(t, r, theta)`.
    pub fn model_field(&self) -> TubeFlowField {
        TubeFlowField {
            period: self.period,
            rot_tau: self.rot_tau,
            r0: self.r0,
        }
    }

    /// Branch-safe section vanishing on the strand family and its antipodes:
    /// `sin(q theta - 2 pi (q theta_b + p t / T))`. Pair with
    /// [`TubeChart::strand_filter`] to keep the strand zeros only.
    pub fn strand_defect(&self) -> impl Fn(&[f64; 3]) -> f64 + Sync + Copy {
        let (q, p, t0, tb) = (self.q as f64, self.p as f64, self.period, self.theta_b);
        move |x: &[f64; 3]| (q * x[2] - TAU * (q * tb + p * x[0] / t0)).sin()
    }

    /// Companion filter selecting the strand zeros of `strand_defect`.
    pub fn strand_filter(&self) -> impl Fn(&[f64; 3]) -> bool + Sync + Copy {
        let (q, p, t0, tb) = (self.q as f64, self.p as f64, self.period, self.theta_b);
        move |x: &[f64; 3]| (q * x[2] - TAU * (q * tb + p * x[0] / t0)).cos() > 0.0
    }
}

/// The undeformed tube flow on `(t, r, theta)`.
#[derive(Debug, Clone, Copy)]
pub struct TubeFlowField {
    pub period: f64,
    pub rot_tau: f64,
    pub r0: f64,
}

impl ChartField for TubeFlowField {
    fn velocity(&self, _x: &[f64; 3]) -> [f64; 3] {
        [1.0, 0.0, TAU * self.rot_tau / self.period]
    }

    fn coordinate_periods(&self) -> [Option<f64>; 3] {
        [Some(self.period), None, Some(TAU)]
    }

    fn in_chart(&self, x: &[f64; 3]) -> bool {
        x[1] >= 0.0 && x[1] < self.r0
    }
}

/// A chart carrying a contact form and its claimed Reeb field, exposed as
/// coefficient functions so the contact identities can be audited by finite
/// differences.
pub trait ContactChart: Sync {
    fn one_form(&self, x: &[f64; 3]) -> [f64; 3];
    fn reeb_velocity(&self, x: &[f64; 3]) -> [f64; 3];
    /// Box from which audit samples are drawn.
    fn sample_box(&self) -> [(f64, f64); 3];
}

/// Deformed slab over a boundary-tube annulus, coordinates `(s, t_tilde, r)`.
///
/// With `rho = rot_sigma`, `W(r) = 1 - pi rho r^2 / T`, `k(r) = 2 pi rho r / T`
/// and `E = exp(delta_bar zeta(s) beta(r))`, the form is `E (ds + W dt)` and
/// the Reeb field satisfies
///
/// ```text
/// k E R = delta_bar zeta'(s) beta(r) W d_r
///       + delta_bar zeta(s) beta'(r) d_t
///       + (k - delta_bar zeta(s) beta'(r) W) d_s .
/// ```
#[derive(Debug, Clone, Copy)]
pub struct TubeSlabChart {
    pub tube: TubeChart,
    pub profile: InflationProfile,
}

impl TubeSlabChart {
    /// Build the chart and verify positivity of the `d_s` coefficient of the
    /// Reeb field on the default `256 x 256 x 64` grid.
    pub fn new(tube: TubeChart, profile: InflationProfile) -> Result<Self> {
        Self::with_grid(tube, profile, (256, 256, 64))
    }

    pub fn with_grid(
        tube: TubeChart,
        profile: InflationProfile,
        grid: (usize, usize, usize),
    ) -> Result<Self> {
        if (tube.r0 - profile.r0).abs() > 1e-12 * tube.r0 {
            return Err(Error::InvalidInput(format!(
                "tube radius {} does not match profile radius {}",
                tube.r0, profile.r0
            )));
        }
        let chart = Self { tube, profile };
        let min_rs = chart.min_s_coefficient(grid);
        if min_rs <= 0.0 {
            return Err(Error::DeltaOutOfRange(format!(
                "delta = {} breaks positivity of the d_s coefficient: min over grid = {:.3e}",
                profile.delta, min_rs
            )));
        }
        Ok(chart)
    }

    /// Minimum of the `d_s` component of the Reeb field over a grid.
    pub fn min_s_coefficient(&self, grid: (usize, usize, usize)) -> f64 {
        let (ns, nt, nr) = grid;
        let qt = self.tube.q.unsigned_abs() as f64 * self.tube.period;
        let mut min_rs = f64::INFINITY;
        for is in 0..ns {
            let s = self.profile.s0 * (is as f64 + 0.5) / ns as f64;
            for it in 0..nt {
                let t = qt * (it as f64 + 0.5) / nt as f64;
                for ir in 0..nr {
                    let r = self.tube.r0 * (ir as f64 + 0.5) / nr as f64;
                    let v = self.reeb_velocity(&[s, t, r]);
                    if v[0] < min_rs {
                        min_rs = v[0];
                    }
                }
            }
        }
        min_rs
    }
}

impl ContactChart for TubeSlabChart {
    fn one_form(&self, x: &[f64; 3]) -> [f64; 3] {
        let (s, r) = (x[0], x[2]);
        let rho = self.tube.rot_sigma();
        let w = 1.0 - PI * rho * r * r / self.tube.period;
        let e =
            (self.profile.delta_bar * self.profile.zeta.eval(s) * self.profile.beta.eval(r)).exp();
        [e, e * w, 0.0]
    }

    fn reeb_velocity(&self, x: &[f64; 3]) -> [f64; 3] {
        let (s, r) = (x[0], x[2]);
        let rho = self.tube.rot_sigma();
        let t0 = self.tube.period;
        let w = 1.0 - PI * rho * r * r / t0;
        let k = TAU * rho * r / t0;
        let db = self.profile.delta_bar;
        let z = self.profile.zeta.eval(s);
        let zp = self.profile.zeta.deriv(s);
        let b = self.profile.beta.eval(r);
        let bp = self.profile.beta.deriv(r);
        let e = (db * z * b).exp();
        let v_r = if b == 0.0 || zp == 0.0 {
            0.0
        } else {
            db * zp * b * w / (k * e)
        };
        let v_t = if bp == 0.0 || z == 0.0 {
            0.0
        } else {
            db * z * bp / (k * e)
        };
        let v_s = if bp == 0.0 || z == 0.0 {
            1.0 / e
        } else {
            (k - db * z * bp * w) / (k * e)
        };
        [v_s, v_t, v_r]
    }

    fn sample_box(&self) -> [(f64, f64); 3] {
        let qt = self.tube.q.unsigned_abs() as f64 * self.tube.period;
        [
            (0.02 * self.profile.s0, 0.98 * self.profile.s0),
            (0.0, qt),
            (0.05 * self.tube.r0, 0.93 * self.tube.r0),
        ]
    }
}

impl ChartField for TubeSlabChart {
    fn velocity(&self, x: &[f64; 3]) -> [f64; 3] {
        self.reeb_velocity(x)
    }

    fn coordinate_periods(&self) -> [Option<f64>; 3] {
        [
            None,
            Some(self.tube.q.unsigned_abs() as f64 * self.tube.period),
            None,
        ]
    }

    fn in_chart(&self, x: &[f64; 3]) -> bool {
        x[0] > -0.25 * self.profile.s0
            && x[0] < 1.25 * self.profile.s0
            && x[2] > 0.0
            && x[2] < self.tube.r0
    }
}

/// Surface piece with the round Liouville structure: one-form
/// `(x dy - y dx)/2` on a disk, Liouville field `(x/2) d_x + (y/2) d_y`.
#[derive(Debug, Clone, Copy)]
pub struct RadialLiouvilleDisk {
    pub radius: f64,
}

impl RadialLiouvilleDisk {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(Self { radius })
    }

    /// Area of the piece in the induced area form `dx ^ dy`.
    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

/// Deformed slab over the interior surface piece, coordinates `(s, x, y)`.
///
/// The form is `exp(delta_bar zeta(s)) (ds + (x dy - y dx)/2)` and the Reeb
/// field contracts the Liouville direction:
/// `R = exp(-delta_bar zeta) (d_s - delta_bar zeta'(s) X)`.
#[derive(Debug, Clone, Copy)]
pub struct Sigma0SlabChart {
    pub disk: RadialLiouvilleDisk,
    pub profile: InflationProfile,
}

impl Sigma0SlabChart {
    pub fn new(disk: RadialLiouvilleDisk, profile: InflationProfile) -> Self {
        Self { disk, profile }
    }
}

impl ContactChart for Sigma0SlabChart {
    fn one_form(&self, x: &[f64; 3]) -> [f64; 3] {
        let e = (self.profile.delta_bar * self.profile.zeta.eval(x[0])).exp();
        [e, -0.5 * e * x[2], 0.5 * e * x[1]]
    }

    fn reeb_velocity(&self, x: &[f64; 3]) -> [f64; 3] {
        let db = self.profile.delta_bar;
        let em = (-db * self.profile.zeta.eval(x[0])).exp();
        let zp = self.profile.zeta.deriv(x[0]);
        [em, -em * db * zp * 0.5 * x[1], -em * db * zp * 0.5 * x[2]]
    }

    fn sample_box(&self) -> [(f64, f64); 3] {
        let half = 0.6 * self.disk.radius;
        [
            (0.02 * self.profile.s0, 0.98 * self.profile.s0),
            (-half, half),
            (-half, half),
        ]
    }
}

impl ChartField for Sigma0SlabChart {
    fn velocity(&self, x: &[f64; 3]) -> [f64; 3] {
        self.reeb_velocity(x)
    }

    fn in_chart(&self, x: &[f64; 3]) -> bool {
        x[0] > -0.25 * self.profile.s0
            && x[0] < 1.25 * self.profile.s0
            && x[1] * x[1] + x[2] * x[2] < self.disk.radius * self.disk.radius * 1.05
    }
}

/// Interior slab with the `s` direction closed up through the surface return
/// map, so that surface points become genuine periodic orbits (of period
/// `s0 + delta`). Valid because the profile is flat near both slab ends.
#[derive(Debug, Clone, Copy)]
pub struct ClosedSigma0Slab(pub Sigma0SlabChart);

impl ChartField for ClosedSigma0Slab {
    fn velocity(&self, x: &[f64; 3]) -> [f64; 3] {
        let s = x[0].rem_euclid(self.0.profile.s0);
        self.0.reeb_velocity(&[s, x[1], x[2]])
    }

    fn coordinate_periods(&self) -> [Option<f64>; 3] {
        [Some(self.0.profile.s0), None, None]
    }

    fn in_chart(&self, x: &[f64; 3]) -> bool {
        x[1] * x[1] + x[2] * x[2] < self.0.disk.radius * self.0.disk.radius * 1.05
    }
}

/// Result of a contact-condition audit over random sample points.
#[derive(Debug, Clone, Copy)]
pub struct ContactAudit {
    /// Max of `|lambda(R) - 1|` over the samples.
    pub max_pairing_dev: f64,
    /// Max over samples and components of `|iota_R dlambda|`, with the
    /// exterior derivative taken by central finite differences.
    pub max_contraction: f64,
    pub samples: usize,
}

/// One audited point.
#[derive(Debug, Clone, Copy)]
pub struct ContactSample {
    pub point: [f64; 3],
    /// `|lambda(R) - 1|`.
    pub pairing_dev: f64,
    /// Max component of `|iota_R dlambda|`.
    pub contraction: f64,
}

/// Evaluate the contact identities at random points of the chart's sample
/// box, one row per point.
pub fn contact_audit_samples<C: ContactChart + ?Sized>(
    chart: &C,
    samples: usize,
    seed: u64,
) -> Vec<ContactSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bx = chart.sample_box();
    let mut rows = Vec::with_capacity(samples);
    for _ in 0..samples {
        let x = [
            rng.gen_range(bx[0].0..bx[0].1),
            rng.gen_range(bx[1].0..bx[1].1),
            rng.gen_range(bx[2].0..bx[2].1),
        ];
        let lam = chart.one_form(&x);
        let r = chart.reeb_velocity(&x);
        let pairing: f64 = (0..3).map(|i| lam[i] * r[i]).sum();

        // d lambda by central differences of the coefficient functions
        let mut grad = [[0.0f64; 3]; 3]; // grad[i][j] = d a_j / d x_i
        for i in 0..3 {
            let h = 1e-5 * (1.0 + x[i].abs());
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let ap = chart.one_form(&xp);
            let am = chart.one_form(&xm);
            for j in 0..3 {
                grad[i][j] = (ap[j] - am[j]) / (2.0 * h);
            }
        }
        let mut contraction = 0.0f64;
        for j in 0..3 {
            let mut component = 0.0;
            for (i, ri) in r.iter().enumerate() {
                component += ri * (grad[i][j] - grad[j][i]);
            }
            contraction = contraction.max(component.abs());
        }
        rows.push(ContactSample {
            point: x,
            pairing_dev: (pairing - 1.0).abs(),
            contraction,
        });
    }
    rows
}

/// Check `lambda(R) = 1` and `iota_R dlambda = 0` at random points of the
/// chart's sample box.
pub fn contact_audit<C: ContactChart + ?Sized>(
    chart: &C,
    samples: usize,
    seed: u64,
) -> ContactAudit {
    let rows = contact_audit_samples(chart, samples, seed);
    ContactAudit {
        max_pairing_dev: rows.iter().map(|s| s.pairing_dev).fold(0.0, f64::max),
        max_contraction: rows.iter().map(|s| s.contraction).fold(0.0, f64::max),
        samples,
    }
}

/// Outcome of one slab traversal.
#[derive(Debug, Clone, Copy)]
pub struct SlabTraversal {
    /// Flow time from `s = 0` to `s = s0`.
    pub time: f64,
    /// Surface point where the trajectory exits at `s = s0`.
    pub exit_point: (f64, f64),
    /// Displacement `|exit - start|`; zero for the interior slab model.
    pub return_defect: f64,
}

/// Flow a point of the interior surface piece through the deformed slab and
/// time the traversal. The time equals `s0 + delta` by the calibration of
/// `delta_bar`, independent of the start point.
pub fn slab_traversal(
    profile: &InflationProfile,
    disk: &RadialLiouvilleDisk,
    start: (f64, f64),
) -> Result<SlabTraversal> {
    if start.0 * start.0 + start.1 * start.1 >= disk.radius * disk.radius {
        return Err(Error::InvalidInput(
            "traversal start point must lie inside the surface piece".into(),
        ));
    }
    let chart = Sigma0SlabChart::new(*disk, *profile);
    let s0 = profile.s0;
    let section_fn = move |x: &[f64; 3]| x[0] - s0;
    let section = Section::new(&section_fn);
    let cfg = IntegratorConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-13,
        max_step: Some(s0 / 64.0),
        ..IntegratorConfig::default()
    };
    let (time, point) = flow::integrate_to_section(
        &chart,
        &[0.0, start.0, start.1],
        3.0 * (s0 + profile.delta) + 1.0,
        &section,
        &cfg,
    )?;
    let dx = point[1] - start.0;
    let dy = point[2] - start.1;
    Ok(SlabTraversal {
        time,
        exit_point: (point[1], point[2]),
        return_defect: (dx * dx + dy * dy).sqrt(),
    })
}

/// Interior slab region data: the surface-piece area and the profile.
#[derive(Debug, Clone, Copy)]
pub struct SlabRegion {
    /// Area of the surface piece under the slab.
    pub a0: f64,
    pub profile: InflationProfile,
}

/// Symplectic volume of the inflation region and its convexity lower bound.
#[derive(Debug, Clone, Copy)]
pub struct SlabVolume {
    /// `(a0/2) integral (e^{2 delta_bar zeta} - 1) ds` by quadrature.
    pub value: f64,
    /// Closed form of the step idealization with the same `delta`.
    pub step_value: f64,
    /// Allowance for the ramp regions where the smooth profile differs from
    /// the step: `(a0/2) (e^{max delta_bar} - 1)^2 * ramp measure`.
    pub smoothing_budget: f64,
    /// `delta * a0`; the volume strictly exceeds it for `delta > 0`.
    pub lower_bound: f64,
    pub exceeds_lower_bound: bool,
}

/// Volume of the region between the surface slab and its inflated graph.
pub fn slab_volume(region: &SlabRegion) -> Result<SlabVolume> {
    let p = &region.profile;
    let integral = quad::integrate(
        |s| (2.0 * p.delta_bar * p.zeta.eval(s)).exp() - 1.0,
        0.0,
        p.s0,
        1e-13 * p.s0.max(1.0),
    )?;
    let value = 0.5 * region.a0 * integral;
    let mass = p.zeta.step_mass();
    let db_step = step_delta_bar(p.delta, mass);
    let step_value = 0.5 * region.a0 * mass * ((2.0 * db_step).exp() - 1.0);
    let db_max = p.delta_bar.max(db_step);
    let smoothing_budget = 0.5 * region.a0 * (db_max.exp() - 1.0).powi(2) * p.zeta.ramp_measure();
    let lower_bound = p.delta * region.a0;
    Ok(SlabVolume {
        value,
        step_value,
        smoothing_budget,
        lower_bound,
        exceeds_lower_bound: p.delta == 0.0 || value > lower_bound,
    })
}

/// Monte-Carlo estimate of the same volume: the region
/// `{0 < sigma < delta_bar zeta(s)}` carries density `e^{2 sigma}` per unit
/// surface area.
pub fn monte_carlo_slab_volume(region: &SlabRegion, samples: usize, seed: u64) -> f64 {
    let p = &region.profile;
    if p.delta_bar == 0.0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let height = p.delta_bar; // zeta max is 1
    let mut acc = 0.0;
    for _ in 0..samples {
        let s = rng.gen_range(0.0..p.s0);
        let sigma = rng.gen_range(0.0..height);
        if sigma < p.delta_bar * p.zeta.eval(s) {
            acc += (2.0 * sigma).exp();
        }
    }
    region.a0 * p.s0 * height * acc / samples as f64
}

/// Both sides of the admissibility inequality
/// `e^{2 delta (F + eps)} < 1 + 2 a0 delta / v`, plus the largest admissible
/// `delta` when one exists.
#[derive(Debug, Clone, Copy)]
pub struct InflationBudget {
    pub lhs: f64,
    pub rhs: f64,
    pub admissible: bool,
    /// Supremum of the admissible range `(0, delta_max)`; `None` when the
    /// frequency bound already saturates `a0 / v`.
    pub delta_max: Option<f64>,
}

/// Evaluate the inflation budget at `delta` and locate the admissible range.
pub fn inflation_budget(f: f64, eps: f64, delta: f64, a0: f64, v: f64) -> Result<InflationBudget> {
    for (name, val) in [("F", f), ("eps", eps), ("delta", delta), ("a0", a0), ("v", v)] {
        if !(val > 0.0) || !val.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{name} must be positive and finite, got {val}"
            )));
        }
    }
    let rate = f + eps;
    let lhs = (2.0 * delta * rate).exp();
    let rhs = 1.0 + 2.0 * a0 * delta / v;
    let admissible = lhs < rhs;
    // g(d) = rhs(d) - lhs(d): g(0) = 0 and g'(0) > 0 iff rate < a0/v
    let delta_max = if rate >= a0 / v {
        None
    } else {
        let g = |d: f64| 1.0 + 2.0 * a0 * d / v - (2.0 * d * rate).exp();
        let mut hi = 1.0;
        let mut guard = 0;
        while g(hi) > 0.0 {
            hi *= 2.0;
            guard += 1;
            if guard > 200 {
                break;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    };
    Ok(InflationBudget {
        lhs,
        rhs,
        admissible,
        delta_max,
    })
}

/// Result of straightening a boundary annulus to constant conormal slope.
pub struct VeryNice {
    /// Conormal winding over one `q T` circuit, rounded from the winding sum.
    pub p: i64,
    /// Distance of the winding sum from the nearest integer before rounding.
    pub winding_residual: f64,
    pub eta_prime: EtaPrime,
}

/// The straightened annulus angle: linear model near the core, the original
/// map outside the cutoff, blended in between.
pub struct EtaPrime {
    pub theta_b: f64,
    pub p: i64,
    pub q: i64,
    pub period: f64,
    beta: CutoffBeta,
    eta: Box<dyn Fn(f64, f64) -> f64 + Sync>,
}

impl EtaPrime {
    /// Angle (in turns) of the straightened surface at `(t_tilde, r)`.
    pub fn eval(&self, t_tilde: f64, r: f64) -> f64 {
        let b = self.beta.eval(r);
        let linear = self.p as f64 * t_tilde / (self.q as f64 * self.period);
        self.theta_b + (1.0 - b) * linear + b * (self.eta)(t_tilde, r)
    }

    pub fn r0(&self) -> f64 {
        self.beta.r0
    }
}

/// Read the conormal winding of a boundary annulus and straighten it.
///
/// `eta` gives the annulus angle in turns at `(t_tilde, r)`, `t_tilde` running
/// over one circuit `[0, |q| T]`; values may be lifts or reduced mod 1. The
/// winding is accumulated from wrapped increments of the core trace
/// `eta(., 0)`; it must land within 0.01 of an integer, and that integer must
/// be coprime to `q`.
pub fn make_very_nice(
    eta: Box<dyn Fn(f64, f64) -> f64 + Sync>,
    q: i64,
    period: f64,
    r0: f64,
    theta_b: f64,
) -> Result<VeryNice> {
    if q == 0 {
        return Err(Error::Degenerate("covering degree q = 0".into()));
    }
    if !(period > 0.0) {
        return Err(Error::InvalidInput(format!(
            "orbit period must be positive, got {period}"
        )));
    }
    let beta = CutoffBeta::new(r0)?;
    let circuit = q.unsigned_abs() as f64 * period;
    let n = 4096usize;
    let mut winding = 0.0f64;
    let mut prev = eta(0.0, 0.0);
    for i in 1..=n {
        let t = circuit * i as f64 / n as f64;
        let cur = eta(t, 0.0);
        let mut inc = cur - prev;
        inc -= inc.round();
        winding += inc;
        prev = cur;
    }
    let p_rounded = winding.round();
    let winding_residual = (winding - p_rounded).abs();
    if winding_residual >= 0.01 {
        return Err(Error::Degenerate(format!(
            "conormal winding {winding:.6} is not integral (residual {winding_residual:.4})"
        )));
    }
    let p = p_rounded as i64;
    if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
        return Err(Error::Degenerate(format!(
            "winding data (p, q) = ({p}, {q}) is not coprime: boundary is not embedded"
        )));
    }
    Ok(VeryNice {
        p,
        winding_residual,
        eta_prime: EtaPrime {
            theta_b,
            p,
            q,
            period,
            beta,
            eta,
        },
    })
}

/// Sampled slope check of a straightened annulus against the transversality
/// bound `d eta / d t_tilde < rot_tau / T` (orientation `q > 0`).
#[derive(Debug, Clone, Copy)]
pub struct TransversalityReport {
    pub max_slope: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Sample `d eta'/d t_tilde` on a `(t, r)` grid and compare with the bound.
pub fn check_transversality(
    eta_prime: &EtaPrime,
    rot_tau: f64,
    grid: (usize, usize),
) -> TransversalityReport {
    let circuit = eta_prime.q.unsigned_abs() as f64 * eta_prime.period;
    let bound = rot_tau / eta_prime.period;
    let (nt, nr) = grid;
    let h = circuit * 1e-6;
    let mut max_slope = f64::NEG_INFINITY;
    for it in 0..nt {
        let t = circuit * it as f64 / nt as f64;
        for ir in 0..=nr {
            let r = eta_prime.r0() * 0.98 * ir as f64 / nr as f64;
            let slope = (eta_prime.eval(t + h, r) - eta_prime.eval(t - h, r)) / (2.0 * h);
            if slope > max_slope {
                max_slope = slope;
            }
        }
    }
    TransversalityReport {
        max_slope,
        bound,
        ok: max_slope < bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{integrate, refine_periodic_orbit, OrbitRefineConfig};
    use approx::assert_relative_eq;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn profile(delta: f64) -> InflationProfile {
        InflationProfile::new(1.0, 0.5, delta).unwrap()
    }

    fn audit_tube() -> TubeChart {
        TubeChart::new(1.0, SQRT2, 0.5, 0, 1, 0.25).unwrap()
    }

    #[test]
    fn zeta_shape() {
        let z = Zeta::new(2.0).unwrap();
        assert_eq!(z.eval(0.0), 0.0);
        assert_eq!(z.eval(0.2), 0.0);
        assert_eq!(z.eval(1.0), 1.0);
        assert_eq!(z.eval(2.0), 0.0);
        for s in [0.1, 0.33, 0.71, 0.95, 1.4] {
            assert_relative_eq!(z.eval(s), z.eval(2.0 - s), epsilon = 1e-14);
        }
        // nondecreasing on the first half
        let mut prev = -1.0;
        for i in 0..=100 {
            let v = z.eval(i as f64 / 100.0);
            assert!(v + 1e-14 >= prev);
            prev = v;
        }
        // integral mass matches the step idealization
        let m = quad::integrate(|s| z.eval(s), 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(m, z.step_mass(), epsilon = 1e-10);
    }

    #[test]
    fn beta_cutoff_ramp_and_derivative_bound() {
        let b = CutoffBeta::new(0.5).unwrap();
        assert_eq!(b.eval(0.1), 0.0);
        assert_eq!(b.eval(0.5 / 3.0), 0.0);
        assert_eq!(b.eval(5.0 * 0.5 / 6.0), 1.0);
        assert_eq!(b.eval(0.49), 1.0);
        let mut max_deriv = 0.0f64;
        for i in 0..=4000 {
            let r = 0.5 * i as f64 / 4000.0;
            max_deriv = max_deriv.max(b.deriv(r));
        }
        assert!(max_deriv <= b.derivative_bound());
        assert_relative_eq!(max_deriv, 3.75 / 0.5, epsilon = 1e-2);
    }

    #[test]
    fn delta_bar_zero_delta() {
        let z = Zeta::new(1.0).unwrap();
        assert_eq!(solve_delta_bar(&z, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn delta_bar_rejects_negative_delta() {
        let z = Zeta::new(1.0).unwrap();
        assert!(solve_delta_bar(&z, -0.1).is_err());
    }

    #[test]
    fn step_delta_bar_closed_form() {
        // mass s0/2 with s0 = 1, delta = 0.1: ln(1.2)
        assert_relative_eq!(
            step_delta_bar(0.1, 0.5),
            0.182_321_556_793_955,
            epsilon = 1e-9
        );
    }

    #[test]
    fn delta_bar_round_trip() {
        let z = Zeta::new(1.3).unwrap();
        for db_star in [0.05, 0.31, 0.8] {
            let delta =
                quad::integrate(|s| (db_star * z.eval(s)).exp(), 0.0, 1.3, 1e-14).unwrap() - 1.3;
            let db = solve_delta_bar(&z, delta).unwrap();
            assert!((db - db_star).abs() <= 1e-10, "got {db}, want {db_star}");
        }
    }

    #[test]
    fn delta_bar_monotone_in_delta() {
        let z = Zeta::new(1.0).unwrap();
        let mut prev = 0.0;
        for i in 1..=20 {
            let db = solve_delta_bar(&z, 0.02 * i as f64).unwrap();
            assert!(db > prev);
            prev = db;
        }
    }

    #[test]
    fn nice_form_pairs_to_one_with_model_field() {
        let tube = audit_tube();
        let field = tube.model_field();
        for r in [0.05, 0.2, 0.45] {
            let x = [0.3, r, 1.1];
            let lam = tube.nice_form_coefficients(&x);
            let v = field.velocity(&x);
            let pairing: f64 = (0..3).map(|i| lam[i] * v[i]).sum();
            assert_relative_eq!(pairing, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn tube_slab_reduces_to_ds_at_zero_delta() {
        let chart = TubeSlabChart::new(audit_tube(), profile(0.0)).unwrap();
        for (s, t, r) in [(0.1, 0.0, 0.1), (0.5, 0.3, 0.3), (0.9, 0.9, 0.45)] {
            let v = chart.reeb_velocity(&[s, t, r]);
            assert_relative_eq!(v[0], 1.0, epsilon = 1e-14);
            assert_eq!(v[1], 0.0);
            assert_eq!(v[2], 0.0);
        }
    }

    #[test]
    fn sigma0_slab_reduces_to_ds_at_zero_delta() {
        let chart = Sigma0SlabChart::new(RadialLiouvilleDisk::new(1.0).unwrap(), profile(0.0));
        let v = chart.reeb_velocity(&[0.4, 0.3, -0.2]);
        assert_eq!(v, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn tube_slab_radial_component_vanishes_inside_cutoff() {
        let chart = TubeSlabChart::new(audit_tube(), profile(0.1)).unwrap();
        for i in 1..20 {
            let r = (0.5 / 3.0) * i as f64 / 20.0; // r < r0/3
            let v = chart.reeb_velocity(&[0.5, 0.2, r]);
            assert_eq!(v[2], 0.0, "d_r coefficient must vanish for r < r0/3");
        }
    }

    #[test]
    fn contact_audit_tube_slab() {
        for delta in [0.0, 0.05, 0.1] {
            let chart = TubeSlabChart::new(audit_tube(), profile(delta)).unwrap();
            let audit = contact_audit(&chart, 1000, 11);
            assert!(
                audit.max_pairing_dev <= 1e-8,
                "pairing dev {} at delta {delta}",
                audit.max_pairing_dev
            );
            assert!(
                audit.max_contraction <= 1e-6,
                "contraction {} at delta {delta}",
                audit.max_contraction
            );
        }
    }

    #[test]
    fn contact_audit_sigma0_slab() {
        for delta in [0.0, 0.05, 0.1] {
            let chart =
                Sigma0SlabChart::new(RadialLiouvilleDisk::new(1.0).unwrap(), profile(delta));
            let audit = contact_audit(&chart, 1000, 13);
            assert!(audit.max_pairing_dev <= 1e-8);
            assert!(audit.max_contraction <= 1e-6);
        }
    }

    #[test]
    fn oversized_delta_is_rejected() {
        // small rotation number makes the positivity margin tight
        let tube = TubeChart::new(1.0, 0.75, 0.5, 0, 1, 0.0).unwrap();
        let got = TubeSlabChart::new(tube, profile(0.6));
        assert!(matches!(got, Err(Error::DeltaOutOfRange(_))));
    }

    #[test]
    fn traversal_time_is_s0_plus_delta() {
        let disk = RadialLiouvilleDisk::new(1.0).unwrap();
        let tr = slab_traversal(&profile(0.1), &disk, (0.35, -0.2)).unwrap();
        assert!((tr.time - 1.1).abs() <= 1e-8, "time {}", tr.time);
        assert!(tr.return_defect <= 1e-8, "defect {}", tr.return_defect);

        let tr0 = slab_traversal(&profile(0.0), &disk, (0.35, -0.2)).unwrap();
        assert!((tr0.time - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn traversal_halves_are_symmetric() {
        struct Reversed(Sigma0SlabChart);
        impl ChartField for Reversed {
            fn velocity(&self, x: &[f64; 3]) -> [f64; 3] {
                let v = self.0.reeb_velocity(x);
                [-v[0], -v[1], -v[2]]
            }
        }
        let p = profile(0.1);
        let disk = RadialLiouvilleDisk::new(1.0).unwrap();
        let chart = Sigma0SlabChart::new(disk, p);
        let cfg = IntegratorConfig {
            max_step: Some(1.0 / 64.0),
            ..IntegratorConfig::default()
        };
        let mid_fn = |x: &[f64; 3]| x[0] - 0.5;
        let mid = Section::new(&mid_fn);
        let (t_fwd, _) =
            flow::integrate_to_section(&chart, &[0.0, 0.3, 0.1], 2.0, &mid, &cfg).unwrap();
        let rev = Reversed(chart);
        let (t_bwd, _) =
            flow::integrate_to_section(&rev, &[1.0, 0.3, 0.1], 2.0, &mid, &cfg).unwrap();
        assert!((t_fwd - t_bwd).abs() <= 1e-8, "{t_fwd} vs {t_bwd}");
    }

    #[test]
    fn closed_slab_orbit_has_period_s0_plus_delta() {
        let p = profile(0.1);
        let disk = RadialLiouvilleDisk::new(1.0).unwrap();
        let field = ClosedSigma0Slab(Sigma0SlabChart::new(disk, p));
        // the whole surface is fixed by the return map, so the residual floor
        // is the integration accuracy, not the Newton tolerance
        let cfg = OrbitRefineConfig {
            tol: 1e-8,
            integrator: IntegratorConfig {
                max_step: Some(0.02),
                ..IntegratorConfig::default()
            },
            ..OrbitRefineConfig::default()
        };
        let (point, period) = refine_periodic_orbit(&field, &[0.0, 0.3, 0.2], 1.0, &cfg).unwrap();
        assert!((period - 1.1).abs() <= 1e-8, "period {period}");
        assert!((point[1] - 0.3).abs() <= 1e-7 && (point[2] - 0.2).abs() <= 1e-7);
    }

    #[test]
    fn slab_volume_zero_delta() {
        let region = SlabRegion {
            a0: 1.0,
            profile: profile(0.0),
        };
        let v = slab_volume(&region).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(v.exceeds_lower_bound);
    }

    #[test]
    fn slab_volume_step_closed_form_and_bound() {
        let region = SlabRegion {
            a0: 1.0,
            profile: profile(0.1),
        };
        let v = slab_volume(&region).unwrap();
        assert_relative_eq!(v.step_value, 0.11, epsilon = 1e-10);
        assert!((v.value - v.step_value).abs() <= v.smoothing_budget);
        assert!(v.value > v.lower_bound);
    }

    #[test]
    fn slab_volume_matches_monte_carlo() {
        let region = SlabRegion {
            a0: 1.0,
            profile: profile(0.1),
        };
        let v = slab_volume(&region).unwrap();
        let mc = monte_carlo_slab_volume(&region, 1_000_000, 7);
        assert!(
            (mc - v.value).abs() / v.value <= 5e-3,
            "quad {} vs mc {}",
            v.value,
            mc
        );
    }

    #[test]
    fn inflation_budget_examples() {
        // direct evaluations
        let b = inflation_budget(0.4, 0.1, 0.1, 1.0, 1.0).unwrap();
        assert_relative_eq!(b.lhs, 0.1f64.exp(), epsilon = 1e-14);
        assert_relative_eq!(b.rhs, 1.2, epsilon = 1e-14);
        assert!(b.admissible);

        let b3 = inflation_budget(0.4, 0.1, 3.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(b3.lhs, 3.0f64.exp(), epsilon = 1e-12);
        assert_relative_eq!(b3.rhs, 7.0, epsilon = 1e-14);
        assert!(!b3.admissible);

        // delta_max solves e^d = 1 + 2d
        let dm = b.delta_max.unwrap();
        assert_relative_eq!(dm.exp(), 1.0 + 2.0 * dm, epsilon = 1e-9);

        // saturated frequency: no admissible delta
        let sat = inflation_budget(0.9, 0.1, 0.1, 1.0, 1.0).unwrap();
        assert!(sat.delta_max.is_none());
        assert!(!sat.admissible);
    }

    #[test]
    fn very_nice_linear_input() {
        let vn = make_very_nice(
            Box::new(|t: f64, _r: f64| 0.3 + t), // p = 1 over q = 1, T = 1
            1,
            1.0,
            0.5,
            0.3,
        )
        .unwrap();
        assert_eq!(vn.p, 1);
        assert!(vn.winding_residual < 1e-10);
        // slope equals the linear model everywhere
        for (t, r) in [(0.2, 0.05), (0.7, 0.3), (0.9, 0.49)] {
            let h = 1e-6;
            let slope = (vn.eta_prime.eval(t + h, r) - vn.eta_prime.eval(t - h, r)) / (2.0 * h);
            assert_relative_eq!(slope, 1.0, epsilon = 1e-6);
        }
        // inner region is exactly the linear model with the requested offset
        assert_relative_eq!(vn.eta_prime.eval(0.4, 0.05), 0.3 + 0.4, epsilon = 1e-14);
    }

    #[test]
    fn very_nice_wiggled_and_multi_twist() {
        let vn = make_very_nice(
            Box::new(|t: f64, _r: f64| t + 0.1 * (TAU * t).sin()),
            1,
            1.0,
            0.5,
            0.0,
        )
        .unwrap();
        assert_eq!(vn.p, 1);
        assert!(vn.winding_residual < 1e-9);

        let vn3 = make_very_nice(
            Box::new(|t: f64, r: f64| 3.0 * t + 0.05 * (TAU * t).sin() * (1.0 + r)),
            1,
            1.0,
            0.5,
            0.0,
        )
        .unwrap();
        assert_eq!(vn3.p, 3);
        assert!(vn3.winding_residual < 1e-9);
    }

    #[test]
    fn very_nice_rejects_fractional_winding() {
        let got = make_very_nice(Box::new(|t: f64, _r: f64| 0.5 * t), 1, 1.0, 0.5, 0.0);
        assert!(matches!(got, Err(Error::Degenerate(_))));
    }

    #[test]
    fn very_nice_rejects_non_coprime_winding() {
        // eta covers two turns over the 2T circuit: p = 2 against q = 2
        let got = make_very_nice(Box::new(|t: f64, _r: f64| t), 2, 1.0, 0.5, 0.0);
        assert!(matches!(got, Err(Error::Degenerate(_))));
    }

    #[test]
    fn straightened_surface_stays_transverse() {
        // rot_tau = sqrt2 > p/q = 1 and the input slope 1 + 0.05*2pi stays
        // below the bound, so the blend must too
        let vn = make_very_nice(
            Box::new(|t: f64, _r: f64| t + 0.05 * (TAU * t).sin()),
            1,
            1.0,
            0.5,
            0.0,
        )
        .unwrap();
        let report = check_transversality(&vn.eta_prime, SQRT2, (64, 32));
        assert!(
            report.ok,
            "max slope {} vs bound {}",
            report.max_slope, report.bound
        );
    }

    #[test]
    fn tube_strand_crossing_rate() {
        // crossings of the strand family per period: |q rot_tau - p| = |rho - 1|
        let tube = TubeChart::new(1.0, 1.0 / SQRT2, 0.5, 1, 1, 0.1).unwrap();
        let field = tube.model_field();
        let value = tube.strand_defect();
        let filter = tube.strand_filter();
        let section = Section::with_filter(&value, &filter);
        let duration = 50.0;
        let summary = integrate(
            &field,
            &[0.0, 0.2, 0.3],
            duration,
            Some(&section),
            &IntegratorConfig::default(),
        )
        .unwrap();
        let expected_rate = (1.0 / SQRT2 - 1.0f64).abs();
        let n = summary.crossing_count.unsigned_abs() as f64;
        assert!(
            (n - expected_rate * duration).abs() <= 1.0,
            "count {n} vs rate*T {}",
            expected_rate * duration
        );
    }
}
