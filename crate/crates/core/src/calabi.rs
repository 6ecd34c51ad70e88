//! Flux, action functions, the Calabi invariant, and mean-action experiments
//! for area-preserving maps of the disk and annulus.
//!
//! The symplectic form is normalized to total mass one: `omega = (c/pi) dx dy`
//! with `c = 1/(1 - r_in^2)`. The standard primitive `beta = g(r) dtheta`,
//! `g(r) = c (r^2 - r_in^2) / (2 pi)`, integrates to 1 over the outer boundary
//! and to 0 over the inner one, which pins the boundary normalization of the
//! action function exactly rather than approximately.
//!
//! For a symplectomorphism `phi` with exact `phi^* beta - beta`, the action
//! function `f` solves `df = phi^* beta - beta` with `f = theta_b` on the
//! distinguished outer boundary. Its surface average is the Calabi invariant;
//! its orbit averages are the mean actions. Twist maps
//! `(r, theta) -> (r, theta + 2 pi tau(r))` give closed forms for all of this
//! and serve as the oracle family; everything generic goes through path
//! integration and nested quadrature.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::solve_in_place;
use crate::quad;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

type Map2 = Arc<dyn Fn(f64, f64) -> (f64, f64) + Sync + Send>;
type Jac2 = Arc<dyn Fn(f64, f64) -> [[f64; 2]; 2] + Sync + Send>;
type Radial = Arc<dyn Fn(f64) -> f64 + Sync + Send>;
type Form2 = Arc<dyn Fn(f64, f64) -> (f64, f64) + Sync + Send>;
type Scalar2 = Arc<dyn Fn(f64, f64) -> f64 + Sync + Send>;

/// Supported surface domains: the unit disk or the annulus `[r_in, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    Disk,
    Annulus { r_in: f64 },
}

impl DomainKind {
    pub fn r_inner(&self) -> f64 {
        match self {
            DomainKind::Disk => 0.0,
            DomainKind::Annulus { r_in } => *r_in,
        }
    }

    /// `c = 1 / (1 - r_in^2)`, making the total mass of `omega` one.
    pub fn area_normalizer(&self) -> f64 {
        let ri = self.r_inner();
        1.0 / (1.0 - ri * ri)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let r2 = x * x + y * y;
        let ri = self.r_inner();
        r2 <= 1.0 + 1e-12 && r2 >= ri * ri - 1e-12
    }

    /// Boundary components as `(label, radius)`, distinguished one first.
    pub fn boundary_components(&self) -> Vec<(String, f64)> {
        match self {
            DomainKind::Disk => vec![("B".into(), 1.0)],
            DomainKind::Annulus { r_in } => vec![("B".into(), 1.0), ("Z1".into(), *r_in)],
        }
    }
}

/// Radial rotation-number profile of a twist map, with its derivative.
#[derive(Clone)]
pub struct TwistProfile {
    tau: Radial,
    tau_prime: Radial,
}

impl TwistProfile {
    pub fn new(tau: Radial, tau_prime: Radial) -> Self {
        Self { tau, tau_prime }
    }

    pub fn tau(&self, r: f64) -> f64 {
        (self.tau)(r)
    }

    pub fn tau_prime(&self, r: f64) -> f64 {
        (self.tau_prime)(r)
    }

    /// Rigid rotation by `theta` turns.
    pub fn rigid(theta: f64) -> Self {
        Self::new(Arc::new(move |_| theta), Arc::new(|_| 0.0))
    }

    /// The idealized disk twist `tau(r) = 2 (r^2 - 1)`. Not a rigid rotation
    /// near the boundary; used for closed-form oracles
    /// (`f(r) = theta_b + r^4 - 1`).
    pub fn ideal() -> Self {
        Self::new(Arc::new(|r| 2.0 * (r * r - 1.0)), Arc::new(|r| 4.0 * r))
    }

    /// Sign-flipped idealized twist `tau(r) = 2 (1 - r^2)`.
    pub fn flipped_ideal() -> Self {
        Self::new(Arc::new(|r| 2.0 * (1.0 - r * r)), Arc::new(|r| -4.0 * r))
    }

    /// The idealized twist flattened to a plateau: `tau = 2 (sigma(r) - 1)`
    /// with `sigma = r^2` up to `r = 0.8`, a quintic fade of the slope on
    /// `[0.8, 0.9]`, constant beyond. Rigid near the boundary, closed form
    /// below `r = 0.8`.
    pub fn smoothed() -> Self {
        Self::new(
            Arc::new(|r| 2.0 * (smoothed_sigma(r) - 1.0)),
            Arc::new(|r| 2.0 * smoothed_sigma_prime(r)),
        )
    }

    /// Boundary rotation of the smoothed twist, `tau(1)`.
    pub fn smoothed_theta_b() -> f64 {
        2.0 * (smoothed_sigma(1.0) - 1.0)
    }

    /// Smooth monotone annulus profile, rigid near both boundary circles:
    /// quintic ramp from `theta_inner` to `theta_outer` over the middle of
    /// `[r_in, 1]`.
    pub fn annulus_ramp(r_in: f64, theta_inner: f64, theta_outer: f64) -> Self {
        let lo = r_in + 0.1 * (1.0 - r_in);
        let w = 0.7 * (1.0 - r_in);
        let dt = theta_outer - theta_inner;
        Self::new(
            Arc::new(move |r| {
                let u = ((r - lo) / w).clamp(0.0, 1.0);
                theta_inner + dt * u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
            }),
            Arc::new(move |r| {
                let u = (r - lo) / w;
                if !(0.0..=1.0).contains(&u) {
                    0.0
                } else {
                    dt * 30.0 * u * u * (1.0 - u) * (1.0 - u) / w
                }
            }),
        )
    }

    pub fn negated(&self) -> Self {
        let tau = self.tau.clone();
        let tau_prime = self.tau_prime.clone();
        Self::new(
            Arc::new(move |r| -tau(r)),
            Arc::new(move |r| -tau_prime(r)),
        )
    }

    /// Profile through given `(r, tau)` knots, interpolated by quintic
    /// smoothsteps segment by segment (so the slope vanishes at every knot)
    /// and constant outside the knot range. Repeating a value across two
    /// consecutive knots yields a rigid collar.
    pub fn from_knots(knots: &[(f64, f64)]) -> crate::error::Result<Self> {
        if knots.len() < 2 {
            return Err(crate::error::Error::InvalidInput(
                "need at least two profile knots".into(),
            ));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(crate::error::Error::InvalidInput(
                "profile knot radii must be strictly increasing".into(),
            ));
        }
        let pts: Vec<(f64, f64)> = knots.to_vec();
        let pts_d = pts.clone();
        let tau = move |r: f64| -> f64 {
            if r <= pts[0].0 {
                return pts[0].1;
            }
            for w in pts.windows(2) {
                if r <= w[1].0 {
                    let u = (r - w[0].0) / (w[1].0 - w[0].0);
                    let s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
                    return w[0].1 + (w[1].1 - w[0].1) * s;
                }
            }
            pts[pts.len() - 1].1
        };
        let tau_prime = move |r: f64| -> f64 {
            if r <= pts_d[0].0 || r >= pts_d[pts_d.len() - 1].0 {
                return 0.0;
            }
            for w in pts_d.windows(2) {
                if r <= w[1].0 {
                    let width = w[1].0 - w[0].0;
                    let u = (r - w[0].0) / width;
                    let sp = 30.0 * u * u * (1.0 - u) * (1.0 - u);
                    return (w[1].1 - w[0].1) * sp / width;
                }
            }
            0.0
        };
        Ok(Self::new(Arc::new(tau), Arc::new(tau_prime)))
    }
}

fn smoothed_sigma(r: f64) -> f64 {
    if r <= 0.8 {
        r * r
    } else {
        // r^2 minus the closed-form integral of 2 u S((u - 0.8)/0.1) du
        let v = ((r - 0.8) / 0.1).min(1.0);
        let i1 = v.powi(4) * (v * v - 3.0 * v + 2.5);
        let i2 = (6.0 / 7.0) * v.powi(7) - 2.5 * v.powi(6) + 2.0 * v.powi(5);
        let r_eff = r.min(0.9);
        r_eff * r_eff - (0.16 * i1 + 0.02 * i2)
    }
}

fn smoothed_sigma_prime(r: f64) -> f64 {
    if r <= 0.8 {
        2.0 * r
    } else if r >= 0.9 {
        0.0
    } else {
        let v = (r - 0.8) / 0.1;
        let s = v * v * v * (10.0 + v * (-15.0 + 6.0 * v));
        2.0 * r * (1.0 - s)
    }
}

/// An area-preserving self-map of the domain, with its inverse and (when
/// available) an analytic Jacobian.
#[derive(Clone)]
pub struct SurfaceMapModel {
    pub domain: DomainKind,
    /// Real lift of the rotation number at the distinguished boundary.
    pub theta_b: f64,
    /// Rigid rotation angles per boundary component (same order as
    /// `domain.boundary_components`).
    pub boundary_rotations: Vec<f64>,
    forward: Map2,
    inverse: Map2,
    jacobian: Option<Jac2>,
    pub twist: Option<TwistProfile>,
}

fn twist_maps(profile: &TwistProfile) -> (Map2, Map2, Jac2) {
    let tau = profile.tau.clone();
    let taui = profile.tau.clone();
    let tauj = profile.tau.clone();
    let tau_prime = profile.tau_prime.clone();
    let forward: Map2 = Arc::new(move |x, y| {
        let r = (x * x + y * y).sqrt();
        let a = TAU * tau(r);
        let (s, c) = a.sin_cos();
        (c * x - s * y, s * x + c * y)
    });
    let inverse: Map2 = Arc::new(move |x, y| {
        let r = (x * x + y * y).sqrt();
        let a = -TAU * taui(r);
        let (s, c) = a.sin_cos();
        (c * x - s * y, s * x + c * y)
    });
    // D phi = Rot(a) + (a'/r) (J Rot(a) z) z^T
    let jacobian: Jac2 = Arc::new(move |x, y| {
        let r = (x * x + y * y).sqrt().max(1e-300);
        let a = TAU * tauj(r);
        let ap = TAU * tau_prime(r);
        let (s, c) = a.sin_cos();
        let rx = c * x - s * y;
        let ry = s * x + c * y;
        let k = ap / r;
        [
            [c - k * ry * x, -s - k * ry * y],
            [s + k * rx * x, c + k * rx * y],
        ]
    });
    (forward, inverse, jacobian)
}

impl SurfaceMapModel {
    /// Twist map of the unit disk.
    pub fn twist_disk(profile: TwistProfile, theta_b: f64) -> Self {
        let (forward, inverse, jacobian) = twist_maps(&profile);
        Self {
            domain: DomainKind::Disk,
            theta_b,
            boundary_rotations: vec![profile.tau(1.0)],
            forward,
            inverse,
            jacobian: Some(jacobian),
            twist: Some(profile),
        }
    }

    /// Twist map of the annulus `[r_in, 1]`.
    pub fn twist_annulus(profile: TwistProfile, r_in: f64, theta_b: f64) -> Result<Self> {
        if !(0.0 < r_in && r_in < 1.0) {
            return Err(Error::InvalidInput(format!(
                "annulus inner radius must lie in (0, 1), got {r_in}"
            )));
        }
        let (forward, inverse, jacobian) = twist_maps(&profile);
        Ok(Self {
            domain: DomainKind::Annulus { r_in },
            theta_b,
            boundary_rotations: vec![profile.tau(1.0), profile.tau(r_in)],
            forward,
            inverse,
            jacobian: Some(jacobian),
            twist: Some(profile),
        })
    }

    /// Custom map from closures; the Jacobian falls back to finite
    /// differences when not supplied.
    pub fn from_parts(
        domain: DomainKind,
        theta_b: f64,
        boundary_rotations: Vec<f64>,
        forward: Map2,
        inverse: Map2,
        jacobian: Option<Jac2>,
    ) -> Self {
        Self {
            domain,
            theta_b,
            boundary_rotations,
            forward,
            inverse,
            jacobian,
            twist: None,
        }
    }

    pub fn forward(&self, x: f64, y: f64) -> (f64, f64) {
        (self.forward)(x, y)
    }

    pub fn backward(&self, x: f64, y: f64) -> (f64, f64) {
        (self.inverse)(x, y)
    }

    pub fn jacobian_at(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        if let Some(j) = &self.jacobian {
            return j(x, y);
        }
        let h = 1e-6;
        let (fxp, fyp) = (self.forward)(x + h, y);
        let (fxm, fym) = (self.forward)(x - h, y);
        let (gxp, gyp) = (self.forward)(x, y + h);
        let (gxm, gym) = (self.forward)(x, y - h);
        [
            [(fxp - fxm) / (2.0 * h), (gxp - gxm) / (2.0 * h)],
            [(fyp - fym) / (2.0 * h), (gyp - gym) / (2.0 * h)],
        ]
    }

    /// Constant density of `omega = (c/pi) dx dy`.
    pub fn omega_density(&self) -> f64 {
        self.domain.area_normalizer() / PI
    }

    /// The inverse experiment `(phi^{-1}, -theta_b)`; only twist models keep
    /// their radial structure under inversion.
    pub fn inverse_model(&self) -> Result<Self> {
        let profile = self
            .twist
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("inverse model is only built for twist maps".into()))?
            .negated();
        match self.domain {
            DomainKind::Disk => Ok(Self::twist_disk(profile, -self.theta_b)),
            DomainKind::Annulus { r_in } => Self::twist_annulus(profile, r_in, -self.theta_b),
        }
    }

    /// Sampled audit: area preservation, inverse consistency, and rotation
    /// consistency on the boundary circles.
    pub fn validate(&self, samples: usize, seed: u64) -> ModelAudit {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ri = self.domain.r_inner();
        let mut max_area_defect = 0.0f64;
        let mut max_inverse_defect = 0.0f64;
        for _ in 0..samples {
            let r = (rng.gen_range((ri * ri)..1.0f64)).sqrt();
            let th = rng.gen_range(0.0..TAU);
            let (x, y) = (r * th.cos(), r * th.sin());
            let j = self.jacobian_at(x, y);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            max_area_defect = max_area_defect.max((det - 1.0).abs());
            let (fx, fy) = self.forward(x, y);
            let (bx, by) = self.backward(fx, fy);
            max_inverse_defect = max_inverse_defect.max((bx - x).hypot(by - y));
        }
        let mut max_boundary_defect = 0.0f64;
        for ((_, radius), rot) in self
            .domain
            .boundary_components()
            .iter()
            .zip(&self.boundary_rotations)
        {
            for i in 0..64 {
                let th = TAU * i as f64 / 64.0;
                let (x, y) = (radius * th.cos(), radius * th.sin());
                let (fx, fy) = self.forward(x, y);
                let target = th + TAU * rot;
                let (tx, ty) = (radius * target.cos(), radius * target.sin());
                max_boundary_defect = max_boundary_defect.max((fx - tx).hypot(fy - ty));
            }
        }
        ModelAudit {
            max_area_defect,
            max_inverse_defect,
            max_boundary_defect,
        }
    }
}

/// Deviations found by `SurfaceMapModel::validate`.
#[derive(Debug, Clone, Copy)]
pub struct ModelAudit {
    pub max_area_defect: f64,
    pub max_inverse_defect: f64,
    /// Distance from the declared rigid rotation on the boundary circles.
    pub max_boundary_defect: f64,
}

/// A primitive one-form of `omega`, as Cartesian coefficient closures; the
/// radial part `g(r)` is kept when the primitive is the standard one.
#[derive(Clone)]
pub struct Primitive {
    coeffs: Form2,
    radial_g: Option<Radial>,
}

impl Primitive {
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        (self.coeffs)(x, y)
    }

    pub fn is_radial(&self) -> bool {
        self.radial_g.is_some()
    }
}

/// The normalized primitive `beta = c (r^2 - r_in^2) dtheta / (2 pi)`.
pub fn standard_primitive(domain: DomainKind) -> Primitive {
    let c = domain.area_normalizer();
    let ri2 = domain.r_inner() * domain.r_inner();
    let g: Radial = Arc::new(move |r| c * (r * r - ri2) / TAU);
    let coeffs: Form2 = Arc::new(move |x, y| {
        let r2 = x * x + y * y;
        // g(r)/r^2 stays finite at the origin for the disk
        let scale = c * (1.0 - ri2 / r2.max(1e-300)) / TAU;
        (-y * scale, x * scale)
    });
    Primitive {
        coeffs,
        radial_g: Some(g),
    }
}

/// Scalar perturbation with an analytic gradient.
pub struct ScalarField {
    pub eval: Scalar2,
    pub grad: Form2,
}

fn poly_eval(monomials: &[(u32, u32, f64)], x: f64, y: f64) -> (f64, f64, f64) {
    let mut p = 0.0;
    let mut px = 0.0;
    let mut py = 0.0;
    for &(i, j, c) in monomials {
        let (i, j) = (i as i32, j as i32);
        p += c * x.powi(i) * y.powi(j);
        if i > 0 {
            px += c * i as f64 * x.powi(i - 1) * y.powi(j);
        }
        if j > 0 {
            py += c * j as f64 * x.powi(i) * y.powi(j - 1);
        }
    }
    (p, px, py)
}

fn window_eval(ri2: f64, x: f64, y: f64) -> (f64, f64, f64) {
    let r2 = x * x + y * y;
    let outer = (1.0 - r2) * (1.0 - r2);
    let d_outer = -4.0 * (1.0 - r2); // per unit of (x, y)
    if ri2 > 0.0 {
        let inner = (r2 - ri2) * (r2 - ri2);
        let d_inner = 4.0 * (r2 - ri2);
        let w = outer * inner;
        let dw = d_outer * inner + outer * d_inner;
        (w, dw * x, dw * y)
    } else {
        (outer, d_outer * x, d_outer * y)
    }
}

impl ScalarField {
    /// `window(x, y) * P(x, y)` with `window = (1 - r^2)^2 (r^2 - r_in^2)^2`
    /// (second factor dropped on the disk) and `P` a polynomial given by
    /// monomial triples `(i, j, coeff)`. Smooth, flat to second order on each
    /// boundary circle.
    pub fn windowed_polynomial(domain: DomainKind, monomials: Vec<(u32, u32, f64)>) -> Self {
        let ri2 = domain.r_inner() * domain.r_inner();
        let m_eval = monomials.clone();
        let m_grad = monomials;
        Self {
            eval: Arc::new(move |x, y| window_eval(ri2, x, y).0 * poly_eval(&m_eval, x, y).0),
            grad: Arc::new(move |x, y| {
                let (w, wx, wy) = window_eval(ri2, x, y);
                let (p, px, py) = poly_eval(&m_grad, x, y);
                (wx * p + w * px, wy * p + w * py)
            }),
        }
    }

    /// The reference disk perturbation `0.3 r^2 (1 - r^2)^2 cos(theta)`,
    /// written as `0.3 x r (1 - r^2)^2`.
    pub fn reference_disk_bump() -> Self {
        Self {
            eval: Arc::new(|x, y| {
                let r = (x * x + y * y).sqrt();
                0.3 * x * r * (1.0 - r * r) * (1.0 - r * r)
            }),
            grad: Arc::new(|x, y| {
                let r = (x * x + y * y).sqrt();
                if r < 1e-150 {
                    return (0.0, 0.0);
                }
                let w = (1.0 - r * r) * (1.0 - r * r);
                let w_r = -4.0 * r * (1.0 - r * r);
                // d(r w)/dr = w + r w_r
                let rad = w + r * w_r;
                (0.3 * (r * w + x * x / r * rad), 0.3 * (x * y / r * rad))
            }),
        }
    }
}

/// `beta + d mu`; the radial fast path is dropped.
pub fn perturbed_primitive(base: &Primitive, mu: &ScalarField) -> Primitive {
    let coeffs = base.coeffs.clone();
    let grad = mu.grad.clone();
    Primitive {
        coeffs: Arc::new(move |x, y| {
            let (bx, by) = coeffs(x, y);
            let (gx, gy) = grad(x, y);
            (bx + gx, by + gy)
        }),
        radial_g: None,
    }
}

/// The one-form `phi^* beta - beta` as a closure.
fn pullback_difference(model: &SurfaceMapModel, beta: &Primitive) -> Form2 {
    let model = model.clone();
    let beta = beta.clone();
    Arc::new(move |x, y| {
        let (fx, fy) = model.forward(x, y);
        let (bx, by) = beta.eval(fx, fy);
        let j = model.jacobian_at(x, y);
        let (ox, oy) = beta.eval(x, y);
        // (phi^* beta)_i = sum_j (d phi_j / d z_i) beta_j(phi z)
        (
            j[0][0] * bx + j[1][0] * by - ox,
            j[0][1] * bx + j[1][1] * by - oy,
        )
    })
}

fn segment_integral(nu: &Form2, from: (f64, f64), to: (f64, f64), tol: f64) -> Result<f64> {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    if dx == 0.0 && dy == 0.0 {
        return Ok(0.0);
    }
    quad::integrate(
        |t| {
            let (x, y) = (from.0 + t * dx, from.1 + t * dy);
            let (nx, ny) = nu(x, y);
            nx * dx + ny * dy
        },
        0.0,
        1.0,
        tol,
    )
}

fn arc_integral(nu: &Form2, radius: f64, from: f64, to: f64, tol: f64) -> Result<f64> {
    if radius == 0.0 || from == to {
        return Ok(0.0);
    }
    quad::integrate(
        |t| {
            let (s, c) = t.sin_cos();
            let (nx, ny) = nu(radius * c, radius * s);
            radius * (-nx * s + ny * c)
        },
        from,
        to,
        tol,
    )
}

/// The action function `f` with `df = phi^* beta - beta` and `f = theta_b` on
/// the distinguished boundary, exposed as `theta_b + tilde` with `tilde`
/// vanishing there.
pub struct ActionFunction {
    pub theta_b: f64,
    nu: Form2,
    /// `tilde'(r)` for radially symmetric data: `2 pi g(r) tau'(r)`.
    radial_w: Option<Radial>,
    r_inner: f64,
    tol: f64,
}

impl ActionFunction {
    /// The `theta_b`-free part, integrated from the base point `(1, 0)`
    /// (along the outer boundary, then radially inward).
    pub fn tilde(&self, x: f64, y: f64) -> Result<f64> {
        if let Some(w) = &self.radial_w {
            let r = (x * x + y * y).sqrt();
            return quad::integrate(|u| w(u), 1.0, r, self.tol);
        }
        self.tilde_generic(x, y)
    }

    fn tilde_generic(&self, x: f64, y: f64) -> Result<f64> {
        let angle = y.atan2(x);
        let arc = arc_integral(&self.nu, 1.0, 0.0, angle, self.tol)?;
        let radial = segment_integral(&self.nu, (angle.cos(), angle.sin()), (x, y), self.tol)?;
        Ok(arc + radial)
    }

    /// Same quantity along the homotopic radial-then-arc path; used by the
    /// path-independence audit.
    fn tilde_alternate(&self, x: f64, y: f64) -> Result<f64> {
        let angle = y.atan2(x);
        let r = (x * x + y * y).sqrt().max(self.r_inner);
        let radial = segment_integral(&self.nu, (1.0, 0.0), (r, 0.0), self.tol)?;
        let arc = arc_integral(&self.nu, r, 0.0, angle, self.tol)?;
        Ok(radial + arc)
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.theta_b + self.tilde(x, y)?)
    }

    /// Value on the circle of the given radius (radial data) or along the
    /// angle-0 ray.
    pub fn eval_radial(&self, r: f64) -> Result<f64> {
        Ok(self.theta_b + self.tilde(r, 0.0)?)
    }
}

/// Periods of `phi^* beta - beta` over the homology basis, plus a sampled
/// closedness defect.
#[derive(Debug, Clone)]
pub struct FluxReport {
    /// One entry per homology generator (none for the disk, the core circle
    /// for the annulus).
    pub periods: Vec<f64>,
    pub is_zero: bool,
    /// Max sampled `|curl(phi^* beta - beta)|`.
    pub closedness_defect: f64,
}

/// Flux of the map with respect to the chosen primitive.
pub fn compute_flux(model: &SurfaceMapModel, beta: &Primitive) -> Result<FluxReport> {
    let nu = pullback_difference(model, beta);
    // closedness: curl by central differences at sampled points
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ri = model.domain.r_inner();
    let mut closedness_defect = 0.0f64;
    for _ in 0..200 {
        let r = rng.gen_range((ri + 0.02 * (1.0 - ri))..0.97f64);
        let th = rng.gen_range(0.0..TAU);
        let (x, y) = (r * th.cos(), r * th.sin());
        let h = 1e-6;
        let dnyx = (nu(x + h, y).1 - nu(x - h, y).1) / (2.0 * h);
        let dnxy = (nu(x, y + h).0 - nu(x, y - h).0) / (2.0 * h);
        closedness_defect = closedness_defect.max((dnyx - dnxy).abs());
    }
    if closedness_defect > 1e-6 {
        return Err(Error::Degenerate(format!(
            "phi^* beta - beta is not closed (defect {closedness_defect:.3e}); \
             the map does not preserve omega"
        )));
    }
    let periods = match model.domain {
        DomainKind::Disk => Vec::new(),
        DomainKind::Annulus { r_in } => {
            let mid = 0.5 * (r_in + 1.0);
            vec![arc_integral(&nu, mid, 0.0, TAU, 1e-12)?]
        }
    };
    let is_zero = periods.iter().all(|p| p.abs() <= 1e-9);
    Ok(FluxReport {
        periods,
        is_zero,
        closedness_defect,
    })
}

/// Build the action function, verifying zero flux, path independence, and
/// constancy on each boundary component.
pub fn action_function(model: &SurfaceMapModel, beta: &Primitive) -> Result<ActionFunction> {
    let flux = compute_flux(model, beta)?;
    if !flux.is_zero {
        return Err(Error::Degenerate(format!(
            "nonzero flux periods {:?}: no single-valued action function",
            flux.periods
        )));
    }
    let nu = pullback_difference(model, beta);
    let radial_w = match (&model.twist, &beta.radial_g) {
        (Some(profile), Some(g)) => {
            let g = g.clone();
            let tp = profile.tau_prime.clone();
            Some(Arc::new(move |r: f64| TAU * g(r) * tp(r)) as Radial)
        }
        _ => None,
    };
    let f = ActionFunction {
        theta_b: model.theta_b,
        nu,
        radial_w,
        r_inner: model.domain.r_inner(),
        tol: 1e-12,
    };

    // path independence at probe points (plus radial consistency if available)
    let ri = model.domain.r_inner();
    for (i, angle) in [0.6f64, 2.1, 3.4, 5.3].iter().enumerate() {
        let r = ri + (0.35 + 0.12 * i as f64) * (1.0 - ri);
        let (x, y) = (r * angle.cos(), r * angle.sin());
        let a = f.tilde_generic(x, y)?;
        let b = f.tilde_alternate(x, y)?;
        if (a - b).abs() > 1e-9 {
            return Err(Error::Degenerate(format!(
                "action function is path dependent at ({x:.3}, {y:.3}): {a:.12e} vs {b:.12e}"
            )));
        }
        if let Some(w) = &f.radial_w {
            let radial = quad::integrate(|u| w(u), 1.0, r, f.tol)?;
            if (a - radial).abs() > 1e-9 {
                return Err(Error::Degenerate(format!(
                    "radial and generic action values disagree at r = {r:.3}"
                )));
            }
        }
    }

    // constancy on each boundary circle
    for (label, radius) in model.domain.boundary_components() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..16 {
            let th = TAU * i as f64 / 16.0;
            let v = f.tilde_generic(radius * th.cos(), radius * th.sin())?;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo > 1e-9 {
            return Err(Error::Degenerate(format!(
                "action function varies by {:.3e} along boundary {label}",
                hi - lo
            )));
        }
    }
    Ok(f)
}

/// Surface average of the action function: `theta_b + integral tilde omega`.
///
/// The total mass of `omega` is one by construction, so the `theta_b` part is
/// carried exactly and an integer shift of `theta_b` shifts the result
/// exactly.
pub fn calabi_invariant(model: &SurfaceMapModel, f: &ActionFunction, tol: f64) -> Result<f64> {
    let c = model.domain.area_normalizer();
    let ri = model.domain.r_inner();
    let integral = if f.radial_w.is_some() {
        // the angular integral collapses: omega becomes 2 c r dr
        quad::integrate_nested(|r| f.tilde(r, 0.0).map(|v| v * 2.0 * c * r), ri, 1.0, tol)?
    } else {
        let density = model.omega_density();
        let inner_tol = (tol * 1e-3).max(1e-13);
        quad::integrate_nested(
            |r| {
                let inner = quad::integrate_periodic_nested(
                    |th| f.tilde(r * th.cos(), r * th.sin()),
                    TAU,
                    inner_tol,
                )?;
                Ok(inner * density * r)
            },
            ri,
            1.0,
            tol,
        )?
    };
    Ok(f.theta_b + integral)
}

/// A periodic orbit of the map: `d` distinct points cycled by `phi`.
#[derive(Debug, Clone)]
pub struct PeriodicOrbit {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl PeriodicOrbit {
    pub fn d(&self) -> usize {
        self.points.len()
    }

    /// Max of `|phi(x_i) - x_{i+1}|` over the cycle.
    pub fn residual(&self, model: &SurfaceMapModel) -> f64 {
        let d = self.points.len();
        let mut worst = 0.0f64;
        for i in 0..d {
            let (fx, fy) = model.forward(self.points[i].0, self.points[i].1);
            let (nx, ny) = self.points[(i + 1) % d];
            worst = worst.max((fx - nx).hypot(fy - ny));
        }
        worst
    }
}

/// Action `sum f(x_i)` and mean action of one orbit. The `theta_b` part is
/// carried exactly: the sum is `d theta_b + sum tilde(x_i)`.
pub fn orbit_action(orbit: &PeriodicOrbit, f: &ActionFunction) -> Result<(f64, f64)> {
    let d = orbit.d() as f64;
    let mut tilde_sum = 0.0;
    for &(x, y) in &orbit.points {
        tilde_sum += f.tilde(x, y)?;
    }
    let action = d * f.theta_b + tilde_sum;
    Ok((action, f.theta_b + tilde_sum / d))
}

/// Orbit search strategy.
pub enum OrbitSearch {
    /// Solve `tau(r) = p/q` over all reduced fractions with `q <= budget`;
    /// one representative orbit per invariant circle.
    Radial { max_denominator: u32 },
    /// Newton refinement of user seeds `(point, d)` toward fixed points of
    /// `phi^d`.
    Newton { seeds: Vec<((f64, f64), u32)> },
}

/// Search result: orbits found plus a log of skipped seeds.
#[derive(Debug)]
pub struct OrbitCensus {
    pub orbits: Vec<PeriodicOrbit>,
    pub skipped: Vec<String>,
}

/// Find periodic orbits of the model.
pub fn find_periodic_orbits(model: &SurfaceMapModel, search: OrbitSearch) -> Result<OrbitCensus> {
    match search {
        OrbitSearch::Radial { max_denominator } => radial_search(model, max_denominator),
        OrbitSearch::Newton { seeds } => newton_search(model, &seeds),
    }
}

fn radial_search(model: &SurfaceMapModel, max_denominator: u32) -> Result<OrbitCensus> {
    let profile = model
        .twist
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("radial orbit search requires a twist profile".into()))?;
    if max_denominator == 0 {
        return Err(Error::InvalidInput(
            "denominator budget must be positive".into(),
        ));
    }
    let ri = model.domain.r_inner();
    let n = 2048usize;
    let grid: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let r = ri + (1.0 - ri) * i as f64 / n as f64;
            (r, profile.tau(r))
        })
        .collect();
    let tau_min = grid.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    let tau_max = grid.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);

    let mut orbits = Vec::new();
    let mut skipped = Vec::new();
    for den in 1..=max_denominator {
        let lo = (tau_min * den as f64).floor() as i64;
        let hi = (tau_max * den as f64).ceil() as i64;
        for num in lo..=hi {
            if crate::model::gcd(num.unsigned_abs(), den as u64) != 1 {
                continue;
            }
            let value = num as f64 / den as f64;
            if value < tau_min - 1e-12 || value > tau_max + 1e-12 {
                continue;
            }
            for root in radial_roots(&grid, profile, value) {
                let d = den as usize;
                let mut points = Vec::with_capacity(d);
                let (mut x, mut y) = (root, 0.0);
                for _ in 0..d {
                    points.push((x, y));
                    let next = model.forward(x, y);
                    x = next.0;
                    y = next.1;
                }
                let orbit = PeriodicOrbit {
                    label: format!("tau={num}/{den}@r={root:.6}"),
                    points,
                };
                if orbit.residual(model) > 1e-9 {
                    skipped.push(format!(
                        "circle at r = {root:.6} (tau = {num}/{den}): closure residual too large"
                    ));
                    continue;
                }
                if d == 1 || distinct_points(&orbit.points) {
                    orbits.push(orbit);
                } else {
                    skipped.push(format!(
                        "circle at r = {root:.6} (tau = {num}/{den}): points collide"
                    ));
                }
            }
        }
    }
    Ok(OrbitCensus { orbits, skipped })
}

fn distinct_points(points: &[(f64, f64)]) -> bool {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if (points[i].0 - points[j].0).hypot(points[i].1 - points[j].1) < 1e-9 {
                return false;
            }
        }
    }
    true
}

/// Roots of `tau(r) = value`: exact hits at grid nodes plus bisected sign
/// changes between nodes.
fn radial_roots(grid: &[(f64, f64)], profile: &TwistProfile, value: f64) -> Vec<f64> {
    let mut roots: Vec<f64> = Vec::new();
    let mut push = |r: f64| {
        if !roots.iter().any(|&e| (e - r).abs() < 1e-9) {
            roots.push(r);
        }
    };
    // runs of consecutive exact hits are circle families (plateaus); emit one
    // representative per run
    let mut run_start: Option<usize> = None;
    for (i, (r, t)) in grid.iter().enumerate() {
        if *t == value {
            if run_start.is_none() {
                run_start = Some(i);
            }
            if i + 1 == grid.len() {
                let s = run_start.unwrap();
                push(0.5 * (grid[s].0 + *r));
            }
        } else if let Some(s) = run_start.take() {
            push(0.5 * (grid[s].0 + grid[i - 1].0));
        }
    }
    for w in grid.windows(2) {
        let (r0, t0) = w[0];
        let (r1, t1) = w[1];
        let g0 = t0 - value;
        let g1 = t1 - value;
        if g0 * g1 < 0.0 {
            let mut lo = r0;
            let mut hi = r1;
            let mut glo = g0;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let gm = profile.tau(mid) - value;
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (gm > 0.0) == (glo > 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            push(0.5 * (lo + hi));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

fn newton_search(model: &SurfaceMapModel, seeds: &[((f64, f64), u32)]) -> Result<OrbitCensus> {
    let mut orbits = Vec::new();
    let mut skipped = Vec::new();
    'seed: for (idx, &((sx, sy), d)) in seeds.iter().enumerate() {
        if d == 0 {
            skipped.push(format!("seed {idx}: period d = 0"));
            continue;
        }
        let iterate = |x: f64, y: f64| -> (f64, f64) {
            let (mut px, mut py) = (x, y);
            for _ in 0..d {
                let next = model.forward(px, py);
                px = next.0;
                py = next.1;
            }
            (px, py)
        };
        let (mut x, mut y) = (sx, sy);
        let mut converged = false;
        for _ in 0..50 {
            let (fx, fy) = iterate(x, y);
            let (gx, gy) = (fx - x, fy - y);
            let g_norm = gx.abs().max(gy.abs());
            if g_norm <= 1e-12 {
                converged = true;
                break;
            }
            let h = 1e-7 * (1.0 + x.abs().max(y.abs()));
            let (fxp, fyp) = iterate(x + h, y);
            let (fxq, fyq) = iterate(x, y + h);
            let mut jac = [
                (fxp - fx) / h - 1.0,
                (fxq - fx) / h,
                (fyp - fy) / h,
                (fyq - fy) / h - 1.0,
            ];
            let mut rhs = [-gx, -gy];
            let step = match solve_in_place(2, &mut jac, &mut rhs, 1e-11) {
                Some(step) => step,
                None => {
                    skipped.push(format!(
                        "seed {idx}: (near-)degenerate Jacobian of the period-{d} map"
                    ));
                    continue 'seed;
                }
            };
            // backtrack until the residual drops
            let mut lam = 1.0;
            let mut accepted = false;
            for _ in 0..12 {
                let (nx, ny) = (x + lam * step[0], y + lam * step[1]);
                let (tx, ty) = iterate(nx, ny);
                if (tx - nx).abs().max((ty - ny).abs()) < g_norm {
                    x = nx;
                    y = ny;
                    accepted = true;
                    break;
                }
                lam *= 0.5;
            }
            if !accepted {
                skipped.push(format!("seed {idx}: Newton stalled (no descent step)"));
                continue 'seed;
            }
            if !model.domain.contains(x, y) {
                skipped.push(format!("seed {idx}: Newton left the domain"));
                continue 'seed;
            }
        }
        if !converged {
            skipped.push(format!("seed {idx}: Newton did not converge"));
            continue;
        }
        let mut points = Vec::with_capacity(d as usize);
        let (mut px, mut py) = (x, y);
        for _ in 0..d {
            points.push((px, py));
            let next = model.forward(px, py);
            px = next.0;
            py = next.1;
        }
        if !distinct_points(&points) {
            skipped.push(format!(
                "seed {idx}: orbit points collide (period divides {d})"
            ));
            continue;
        }
        let orbit = PeriodicOrbit {
            label: format!("newton-seed-{idx}@d={d}"),
            points,
        };
        if orbit.residual(model) <= 1e-9 {
            orbits.push(orbit);
        } else {
            skipped.push(format!("seed {idx}: closure residual too large"));
        }
    }
    Ok(OrbitCensus { orbits, skipped })
}

/// Hypothesis/conclusion verdicts of the mean-action inequalities.
#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub cal: f64,
    /// `(component label, boundary value of f)`.
    pub boundary_values: Vec<(String, f64)>,
    pub min_boundary: f64,
    pub max_boundary: f64,
    /// `Cal < min f|boundary` strictly (beyond tolerance).
    pub lower_hypothesis_holds: bool,
    /// `Cal > max f|boundary` strictly (the dual hypothesis).
    pub upper_hypothesis_holds: bool,
    /// Equality with a boundary value within tolerance.
    pub boundary_equality: bool,
    /// Smallest and largest orbit mean actions, with labels.
    pub min_mean: Option<(String, f64)>,
    pub max_mean: Option<(String, f64)>,
    /// Some orbit has mean action `<= Cal` (within tolerance).
    pub lower_witnessed: bool,
    /// Some orbit has mean action `>= Cal` (within tolerance).
    pub upper_witnessed: bool,
    pub tol: f64,
}

/// Evaluate both mean-action inequalities on the given orbits.
pub fn theorem_check(
    model: &SurfaceMapModel,
    f: &ActionFunction,
    cal: f64,
    orbits: &[PeriodicOrbit],
    tol: f64,
) -> Result<TheoremReport> {
    let mut boundary_values = Vec::new();
    for (label, radius) in model.domain.boundary_components() {
        let v = f.eval(radius, 0.0)?;
        boundary_values.push((label, v));
    }
    let min_boundary = boundary_values
        .iter()
        .map(|b| b.1)
        .fold(f64::INFINITY, f64::min);
    let max_boundary = boundary_values
        .iter()
        .map(|b| b.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let boundary_equality = boundary_values.iter().any(|b| (cal - b.1).abs() <= tol);

    let mut min_mean: Option<(String, f64)> = None;
    let mut max_mean: Option<(String, f64)> = None;
    for orbit in orbits {
        let (_, mean) = orbit_action(orbit, f)?;
        if min_mean.as_ref().is_none_or(|m| mean < m.1) {
            min_mean = Some((orbit.label.clone(), mean));
        }
        if max_mean.as_ref().is_none_or(|m| mean > m.1) {
            max_mean = Some((orbit.label.clone(), mean));
        }
    }
    Ok(TheoremReport {
        cal,
        boundary_values,
        min_boundary,
        max_boundary,
        lower_hypothesis_holds: cal < min_boundary - tol,
        upper_hypothesis_holds: cal > max_boundary + tol,
        boundary_equality,
        lower_witnessed: min_mean.as_ref().is_some_and(|m| m.1 <= cal + tol),
        upper_witnessed: max_mean.as_ref().is_some_and(|m| m.1 >= cal - tol),
        min_mean,
        max_mean,
        tol,
    })
}

/// Deviations of the Calabi invariant and orbit actions under an exact change
/// of primitive `beta -> beta + d mu`.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationReport {
    pub cal_base: f64,
    pub cal_perturbed: f64,
    pub max_cal_dev: f64,
    pub max_action_dev: f64,
}

/// Recompute the Calabi invariant and orbit actions with `beta + d mu` and
/// report the deviations; both quantities are invariant under the change, so
/// the deviations measure numerical error only.
///
/// `mu` must respect the boundary conditions: it and its gradient must vanish
/// on every boundary circle.
pub fn primitive_perturbation_check(
    model: &SurfaceMapModel,
    beta: &Primitive,
    mu: &ScalarField,
    orbits: &[PeriodicOrbit],
    quad_tol: f64,
) -> Result<PerturbationReport> {
    for (label, radius) in model.domain.boundary_components() {
        for i in 0..32 {
            let th = TAU * i as f64 / 32.0;
            let (x, y) = (radius * th.cos(), radius * th.sin());
            let v = (mu.eval)(x, y).abs();
            let (gx, gy) = (mu.grad)(x, y);
            if v > 1e-9 || gx.hypot(gy) > 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "perturbation breaks the boundary conditions on {label}: \
                     |mu| = {v:.3e}, |grad mu| = {:.3e}",
                    gx.hypot(gy)
                )));
            }
        }
    }
    let f_base = action_function(model, beta)?;
    let beta_pert = perturbed_primitive(beta, mu);
    let f_pert = action_function(model, &beta_pert)?;
    let cal_base = calabi_invariant(model, &f_base, quad_tol)?;
    let cal_perturbed = calabi_invariant(model, &f_pert, quad_tol)?;
    let mut max_action_dev = 0.0f64;
    for orbit in orbits {
        let (a0, _) = orbit_action(orbit, &f_base)?;
        let (a1, _) = orbit_action(orbit, &f_pert)?;
        max_action_dev = max_action_dev.max((a1 - a0).abs());
    }
    Ok(PerturbationReport {
        cal_base,
        cal_perturbed,
        max_cal_dev: (cal_perturbed - cal_base).abs(),
        max_action_dev,
    })
}

/// Collapse the inner boundary circle of an annulus twist model to a point,
/// producing the quotient disk twist model. The radius map
/// `R(r) = sqrt(c (r^2 - r_in^2))` matches the area forms and carries the
/// standard primitive to the standard primitive, so the Calabi invariant and
/// the actions of surviving orbits are unchanged.
pub fn collapse_annulus_twist(model: &SurfaceMapModel) -> Result<SurfaceMapModel> {
    let DomainKind::Annulus { r_in } = model.domain else {
        return Err(Error::InvalidInput("collapse requires an annulus model".into()));
    };
    let profile = model
        .twist
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("collapse requires a twist model".into()))?;
    let c = model.domain.area_normalizer();
    let tau = profile.tau.clone();
    let tau_prime = profile.tau_prime.clone();
    let ri2 = r_in * r_in;
    let collapsed = TwistProfile::new(
        Arc::new(move |cap_r| tau((ri2 + cap_r * cap_r / c).sqrt())),
        Arc::new(move |cap_r| {
            let r = (ri2 + cap_r * cap_r / c).sqrt();
            if r <= 0.0 {
                0.0
            } else {
                tau_prime(r) * cap_r / (c * r)
            }
        }),
    );
    Ok(SurfaceMapModel::twist_disk(collapsed, model.theta_b))
}

/// Radius of the collapsed image of an annulus circle.
pub fn collapsed_radius(r: f64, r_in: f64) -> f64 {
    let c = 1.0 / (1.0 - r_in * r_in);
    (c * (r * r - r_in * r_in)).sqrt()
}
