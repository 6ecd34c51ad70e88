//! Closed-form model: the boundary of a four-dimensional ellipsoid E(a, b).
//!
//! With the round one-form restricted from C^2, the Reeb field rotates the two
//! angular coordinates at rates 2*pi/a and 2*pi/b. For a/b irrational there
//! are exactly two simple orbits: the core circles of the two solid tori. All
//! invariants of the constant-slope `(p, q)` surface and of the disk page are
//! available in closed form, which makes this the reference fixture for every
//! other module.

use crate::error::{Error, Result};
use crate::flow::ChartField;
use crate::model::{gcd, BoundaryIncidence, RatioEntry, SimpleOrbit, SurfaceRecord};

const TAU: f64 = std::f64::consts::TAU;

/// The model contact manifold: boundary of the ellipsoid with parameters `a`, `b`.
#[derive(Debug, Clone, Copy)]
pub struct Ellipsoid {
    pub a: f64,
    pub b: f64,
    /// Caller-supplied assertion that `a/b` is irrational; not decidable
    /// numerically.
    pub irrational_ratio: bool,
}

impl Ellipsoid {
    pub fn new(a: f64, b: f64, irrational_ratio: bool) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "ellipsoid parameters must be positive and finite, got ({a}, {b})"
            )));
        }
        Ok(Self {
            a,
            b,
            irrational_ratio,
        })
    }

    /// The two simple Reeb orbits, with actions `(a, b)` and rotation numbers
    /// `(a/b, b/a)` in the Seifert framing.
    pub fn orbits(&self) -> Result<(SimpleOrbit, SimpleOrbit)> {
        if !self.irrational_ratio {
            return Err(Error::InvalidInput(
                "orbit census requires the a/b-irrational flag: for rational ratio every \
                 torus orbit closes up"
                    .into(),
            ));
        }
        Ok((
            SimpleOrbit::new("gamma1", self.a, self.a / self.b, true)?,
            SimpleOrbit::new("gamma2", self.b, self.b / self.a, true)?,
        ))
    }

    /// Contact volume `a * b`.
    pub fn volume(&self) -> f64 {
        self.a * self.b
    }
}

/// Which surface to carry: the constant-slope class `(p, q)` or the disk page
/// bounded by the first core circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    LineClass { p: u32, q: u32 },
    Disk,
}

/// A surface in the ellipsoid, described by its class.
#[derive(Debug, Clone, Copy)]
pub struct PqSurface {
    pub kind: SurfaceKind,
}

impl PqSurface {
    pub fn line_class(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidInput(format!(
                "line class requires positive (p, q), got ({p}, {q})"
            )));
        }
        if gcd(p as u64, q as u64) != 1 {
            return Err(Error::InvalidInput(format!(
                "line class (p, q) = ({p}, {q}) is not primitive"
            )));
        }
        Ok(Self {
            kind: SurfaceKind::LineClass { p, q },
        })
    }

    pub fn disk() -> Self {
        Self {
            kind: SurfaceKind::Disk,
        }
    }
}

/// Intersection count of one orbit with the surface, next to the orbit record.
#[derive(Debug, Clone)]
pub struct OrbitCrossings {
    pub orbit: SimpleOrbit,
    pub intersections: f64,
    /// Fractional rotation number for boundary orbits; `None` for interior ones.
    pub rot_sigma: Option<f64>,
}

/// Derived data of the surface: area and boundary incidences.
///
/// The covering degree convention follows the orientation for which the
/// oriented boundary of the line-class surface is `q*gamma2 - p*gamma1`, so
/// the incidence on `gamma1` carries degree `-p` with conormal winding `q`,
/// and the incidence on `gamma2` carries degree `q` with conormal winding `p`.
pub fn pq_surface_data(e: &Ellipsoid, s: &PqSurface) -> Result<SurfaceRecord> {
    let (g1, g2) = e.orbits()?;
    match s.kind {
        SurfaceKind::LineClass { p, q } => {
            let area = e.b * q as f64 - e.a * p as f64;
            if area <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "line class orientation requires b*q > a*p, got b*q - a*p = {area:.6e}"
                )));
            }
            let inc1 = BoundaryIncidence::new(g1, 1, -(p as i64), q as i64)?;
            let inc2 = BoundaryIncidence::new(g2, 1, q as i64, p as i64)?;
            SurfaceRecord::new(area, vec![inc1, inc2], true)
        }
        SurfaceKind::Disk => {
            // page {theta2 = const}: boundary gamma1 with degree 1, Seifert conormal
            let inc1 = BoundaryIncidence::new(g1, 1, 1, 0)?;
            SurfaceRecord::new(e.a, vec![inc1], true)
        }
    }
}

/// Intersection counts of both simple orbits with the surface.
pub fn orbit_crossings(e: &Ellipsoid, s: &PqSurface) -> Result<[OrbitCrossings; 2]> {
    let record = pq_surface_data(e, s)?;
    let (g1, g2) = e.orbits()?;
    match s.kind {
        SurfaceKind::LineClass { .. } => {
            let c1 = record.boundary[0].intersection_number()?;
            let c2 = record.boundary[1].intersection_number()?;
            Ok([
                OrbitCrossings {
                    orbit: g1,
                    intersections: c1,
                    rot_sigma: Some(record.boundary[0].rot_sigma()),
                },
                OrbitCrossings {
                    orbit: g2,
                    intersections: c2,
                    rot_sigma: Some(record.boundary[1].rot_sigma()),
                },
            ])
        }
        SurfaceKind::Disk => {
            let c1 = record.boundary[0].intersection_number()?;
            Ok([
                OrbitCrossings {
                    orbit: g1,
                    intersections: c1,
                    rot_sigma: Some(record.boundary[0].rot_sigma()),
                },
                // gamma2 pierces the page once per period, transversally
                OrbitCrossings {
                    orbit: g2,
                    intersections: 1.0,
                    rot_sigma: None,
                },
            ])
        }
    }
}

/// Crossings per unit time of an interior trajectory with the surface.
///
/// For the line class this is `|q/a - p/b|`, the angular-defect rate of the
/// linear flow; with the chosen orientation it equals `(b*q - a*p)/(a*b)`,
/// i.e. area over volume. The disk page is crossed at rate `1/b`.
pub fn torus_crossing_rate(e: &Ellipsoid, s: &PqSurface) -> f64 {
    match s.kind {
        SurfaceKind::LineClass { p, q } => (q as f64 / e.a - p as f64 / e.b).abs(),
        SurfaceKind::Disk => 1.0 / e.b,
    }
}

/// Ratio entries (intersections, action) for the inequality evaluator.
pub fn ratio_entries(e: &Ellipsoid, s: &PqSurface) -> Result<Vec<RatioEntry>> {
    Ok(orbit_crossings(e, s)?
        .into_iter()
        .map(|c| RatioEntry::new(c.orbit.label.clone(), c.intersections, c.orbit.action))
        .collect())
}

/// Angular chart on the open torus region: state `(theta1, theta2, x)` where
/// the third coordinate is the conserved moment `pi |z1|^2`.
#[derive(Debug, Clone, Copy)]
pub struct AngularChart {
    pub e: Ellipsoid,
}

impl ChartField for AngularChart {
    fn velocity(&self, _x: &[f64; 3]) -> [f64; 3] {
        [TAU / self.e.a, TAU / self.e.b, 0.0]
    }

    fn coordinate_periods(&self) -> [Option<f64>; 3] {
        [Some(TAU), Some(TAU), None]
    }

    fn in_chart(&self, x: &[f64; 3]) -> bool {
        x[2] > 0.0 && x[2] < self.e.a
    }
}

/// Chart near the first core circle: state `(theta1, x2, y2)` with the second
/// complex coordinate in Cartesian form. The core orbit is `x2 = y2 = 0`.
#[derive(Debug, Clone, Copy)]
pub struct CoreOrbitChart {
    pub e: Ellipsoid,
}

impl ChartField for CoreOrbitChart {
    fn velocity(&self, x: &[f64; 3]) -> [f64; 3] {
        let w = TAU / self.e.b;
        [TAU / self.e.a, -w * x[2], w * x[1]]
    }

    fn coordinate_periods(&self) -> [Option<f64>; 3] {
        [Some(TAU), None, None]
    }
}

/// As `CoreOrbitChart` but around the second core circle: `(theta2, x1, y1)`.
#[derive(Debug, Clone, Copy)]
pub struct SecondCoreOrbitChart {
    pub e: Ellipsoid,
}

impl ChartField for SecondCoreOrbitChart {
    fn velocity(&self, x: &[f64; 3]) -> [f64; 3] {
        let w = TAU / self.e.a;
        [TAU / self.e.b, -w * x[2], w * x[1]]
    }

    fn coordinate_periods(&self) -> [Option<f64>; 3] {
        [Some(TAU), None, None]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::evaluate_main_inequality;
    use approx::assert_relative_eq;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn e12() -> Ellipsoid {
        Ellipsoid::new(1.0, SQRT2, true).unwrap()
    }

    #[test]
    fn orbit_census() {
        let (g1, g2) = e12().orbits().unwrap();
        assert_relative_eq!(g1.action, 1.0);
        assert_relative_eq!(g2.action, SQRT2);
        assert_relative_eq!(g1.rot_tau, 1.0 / SQRT2, epsilon = 1e-15);
        assert_relative_eq!(g2.rot_tau, SQRT2, epsilon = 1e-15);
        assert!(g1.elliptic && g2.elliptic);
    }

    #[test]
    fn orbit_census_requires_irrational_flag() {
        let e = Ellipsoid::new(1.0, 2.0, false).unwrap();
        assert!(e.orbits().is_err());
    }

    #[test]
    fn actions_scale_linearly() {
        for c in [0.5, 2.0, 3.25] {
            let e = Ellipsoid::new(c, c * SQRT2, true).unwrap();
            let (g1, g2) = e.orbits().unwrap();
            assert_relative_eq!(g1.action, c, epsilon = 1e-14);
            assert_relative_eq!(g2.action, c * SQRT2, epsilon = 1e-14);
        }
    }

    #[test]
    fn volume_values() {
        assert_relative_eq!(e12().volume(), SQRT2, epsilon = 1e-15);
        assert_relative_eq!(Ellipsoid::new(1.0, 1.0, false).unwrap().volume(), 1.0);
        assert_relative_eq!(Ellipsoid::new(2.0, 3.0, false).unwrap().volume(), 6.0);
    }

    #[test]
    fn line_class_surface_data() {
        let s = PqSurface::line_class(1, 1).unwrap();
        let record = pq_surface_data(&e12(), &s).unwrap();
        assert_relative_eq!(record.area, SQRT2 - 1.0, epsilon = 1e-15);
        let crossings = orbit_crossings(&e12(), &s).unwrap();
        assert_relative_eq!(
            crossings[0].intersections,
            (SQRT2 - 1.0) / SQRT2,
            epsilon = 1e-15
        );
        assert_relative_eq!(crossings[1].intersections, SQRT2 - 1.0, epsilon = 1e-15);
    }

    #[test]
    fn disk_surface_data() {
        let s = PqSurface::disk();
        let record = pq_surface_data(&e12(), &s).unwrap();
        assert_relative_eq!(record.area, 1.0);
        let crossings = orbit_crossings(&e12(), &s).unwrap();
        assert_relative_eq!(crossings[0].intersections, 1.0 / SQRT2, epsilon = 1e-15);
        assert_relative_eq!(crossings[1].intersections, 1.0);
        assert!(crossings[1].rot_sigma.is_none());
    }

    #[test]
    fn one_two_class_from_direct_substitution() {
        let s = PqSurface::line_class(1, 2).unwrap();
        let record = pq_surface_data(&e12(), &s).unwrap();
        assert_relative_eq!(record.area, 2.0 * SQRT2 - 1.0, epsilon = 1e-14);
        let crossings = orbit_crossings(&e12(), &s).unwrap();
        assert_relative_eq!(
            crossings[0].intersections,
            (2.0 * SQRT2 - 1.0) / SQRT2,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            crossings[1].intersections,
            2.0 * SQRT2 - 1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn wrong_orientation_rejected() {
        let e = Ellipsoid::new(2.0, 1.0 / SQRT2, true).unwrap();
        let s = PqSurface::line_class(3, 1).unwrap();
        assert!(pq_surface_data(&e, &s).is_err());
    }

    #[test]
    fn crossing_rate_examples() {
        let s11 = PqSurface::line_class(1, 1).unwrap();
        assert_relative_eq!(
            torus_crossing_rate(&e12(), &s11),
            1.0 - 1.0 / SQRT2,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            torus_crossing_rate(&e12(), &PqSurface::disk()),
            1.0 / SQRT2,
            epsilon = 1e-15
        );
        // rational tangency: flow parallel to the class
        let e = Ellipsoid::new(1.0, 2.0, false).unwrap();
        let s = PqSurface::line_class(2, 1).unwrap();
        assert_relative_eq!(torus_crossing_rate(&e, &s), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn crossing_rate_equals_area_over_volume() {
        for (a, b) in [(1.0, SQRT2), (1.0, 1.618_033_988_749_895), (2.0, 3.0 * SQRT2)] {
            let e = Ellipsoid::new(a, b, true).unwrap();
            for (p, q) in [(1u32, 1u32), (1, 2), (2, 3)] {
                if b * q as f64 <= a * p as f64 {
                    continue;
                }
                let s = PqSurface::line_class(p, q).unwrap();
                let record = pq_surface_data(&e, &s).unwrap();
                assert_relative_eq!(
                    torus_crossing_rate(&e, &s),
                    record.area / e.volume(),
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn frequency_ratios_all_equal_threshold() {
        for kind in [PqSurface::line_class(1, 1).unwrap(), PqSurface::disk()] {
            let record = pq_surface_data(&e12(), &kind).unwrap();
            let entries = ratio_entries(&e12(), &kind).unwrap();
            let report =
                evaluate_main_inequality(&entries, record.area, e12().volume(), 1e-12).unwrap();
            assert!(report.any_equality);
            for row in &report.rows {
                assert_relative_eq!(row.ratio, report.threshold, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn scaling_behavior() {
        // (a,b) -> (ca,cb): area and actions scale by c, volume by c^2,
        // frequency ratios by 1/c
        let s = PqSurface::line_class(1, 2).unwrap();
        let base = e12();
        let base_record = pq_surface_data(&base, &s).unwrap();
        for c in [0.5, 2.0, 5.0] {
            let scaled = Ellipsoid::new(c * base.a, c * base.b, true).unwrap();
            let record = pq_surface_data(&scaled, &s).unwrap();
            assert_relative_eq!(record.area, c * base_record.area, epsilon = 1e-12);
            assert_relative_eq!(scaled.volume(), c * c * base.volume(), epsilon = 1e-12);
            let base_entries = ratio_entries(&base, &s).unwrap();
            let entries = ratio_entries(&scaled, &s).unwrap();
            for (e_scaled, e_base) in entries.iter().zip(&base_entries) {
                assert_relative_eq!(
                    e_scaled.intersections / e_scaled.action,
                    e_base.intersections / e_base.action / c,
                    epsilon = 1e-12
                );
            }
        }
    }
}
