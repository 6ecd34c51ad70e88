//! Shared vocabulary for Reeb orbits and symplectic surfaces with boundary,
//! and the frequency-vs-area inequality evaluator.
//!
//! A simple Reeb orbit carries its period (symplectic action) and a rotation
//! number relative to a declared trivialization of its normal bundle. A
//! surface with boundary on such orbits is described only through derived
//! invariants: its area and, per boundary orbit, the incidence data
//! `(m, q, p_tau)`:
//!
//! * `m`  - number of boundary components mapping to the orbit,
//! * `q`  - common signed covering degree of those components relative to the
//!   orbit orientation (negative when the boundary runs against the orbit),
//! * `p_tau` - winding of the surface conormal around the orbit, measured in
//!   the same trivialization as `rot_tau`.
//!
//! The induced fractional rotation number is `rot_tau - p_tau/|q|`, and the
//! intersection number of the orbit with the surface is `m * q * rot_sigma`,
//! which must be positive for a surface transverse to the flow.

use crate::error::{Error, Result};

/// Default absolute tolerance for equality decisions on derived quantities.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A simple (embedded) periodic orbit of the Reeb flow.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleOrbit {
    pub label: String,
    /// Period of the orbit; equals the symplectic action.
    pub action: f64,
    /// Rotation number with respect to a declared trivialization.
    pub rot_tau: f64,
    pub elliptic: bool,
}

impl SimpleOrbit {
    pub fn new(label: impl Into<String>, action: f64, rot_tau: f64, elliptic: bool) -> Result<Self> {
        if !(action > 0.0) || !action.is_finite() {
            return Err(Error::InvalidInput(format!(
                "orbit action must be positive and finite, got {action}"
            )));
        }
        Ok(Self {
            label: label.into(),
            action,
            rot_tau,
            elliptic,
        })
    }
}

/// Incidence data of a surface boundary with one simple orbit.
#[derive(Debug, Clone)]
pub struct BoundaryIncidence {
    pub orbit: SimpleOrbit,
    /// Number of boundary components mapping to this orbit.
    pub m: u32,
    /// Common signed covering degree of those components.
    pub q: i64,
    /// Conormal winding in the trivialization used by `orbit.rot_tau`.
    pub p_tau: i64,
}

impl BoundaryIncidence {
    pub fn new(orbit: SimpleOrbit, m: u32, q: i64, p_tau: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Degenerate(format!(
                "boundary incidence on {} has covering degree q = 0",
                orbit.label
            )));
        }
        if m == 0 {
            return Err(Error::InvalidInput(format!(
                "boundary incidence on {} has m = 0 components",
                orbit.label
            )));
        }
        if gcd(p_tau.unsigned_abs(), q.unsigned_abs()) != 1 {
            return Err(Error::Degenerate(format!(
                "conormal data (p_tau, q) = ({p_tau}, {q}) on {} is not coprime",
                orbit.label
            )));
        }
        Ok(Self { orbit, m, q, p_tau })
    }

    /// Rotation number of the orbit relative to the fractional framing the
    /// surface induces: `rot_tau - p_tau / |q|`.
    pub fn rot_sigma(&self) -> f64 {
        self.orbit.rot_tau - self.p_tau as f64 / self.q.unsigned_abs() as f64
    }

    /// Intersection number `m * q * rot_sigma` of the orbit with the surface.
    ///
    /// Fails when the result is not strictly positive, which signals that the
    /// signs of `q` and `rot_sigma` are inconsistent with a surface positively
    /// transverse to the flow.
    pub fn intersection_number(&self) -> Result<f64> {
        let value = self.m as f64 * self.q as f64 * self.rot_sigma();
        if value > 0.0 {
            Ok(value)
        } else {
            Err(Error::Degenerate(format!(
                "m*q*rot_sigma = {value:.6e} on {} is not positive (sign(q) != sign(rot_sigma))",
                self.orbit.label
            )))
        }
    }
}

/// A surface described by its derived invariants only.
#[derive(Debug, Clone)]
pub struct SurfaceRecord {
    /// Integral of the area form over the surface.
    pub area: f64,
    pub boundary: Vec<BoundaryIncidence>,
    /// Whether interior transversality to the flow has been sampled.
    pub interior_transversal: bool,
}

impl SurfaceRecord {
    pub fn new(area: f64, boundary: Vec<BoundaryIncidence>, interior_transversal: bool) -> Result<Self> {
        if !(area > 0.0) || !area.is_finite() {
            return Err(Error::InvalidInput(format!(
                "surface area must be positive and finite, got {area}"
            )));
        }
        let record = Self {
            area,
            boundary,
            interior_transversal,
        };
        record.validate(DEFAULT_TOL)?;
        Ok(record)
    }

    /// Check the sign constraints on every boundary incidence.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for inc in &self.boundary {
            let rs = inc.rot_sigma();
            if rs.abs() <= tol {
                return Err(Error::Degenerate(format!(
                    "rot_sigma vanishes (within {tol:.1e}) on {}",
                    inc.orbit.label
                )));
            }
            if (rs > 0.0) != (inc.q > 0) {
                return Err(Error::Degenerate(format!(
                    "sign(rot_sigma) != sign(q) on {}",
                    inc.orbit.label
                )));
            }
            inc.intersection_number()?;
        }
        Ok(())
    }
}

/// Crossing frequency `intersections / action` of one orbit.
pub fn frequency_ratio(intersections: f64, action: f64) -> Result<f64> {
    if !(action > 0.0) || !action.is_finite() {
        return Err(Error::InvalidInput(format!(
            "action must be positive and finite, got {action}"
        )));
    }
    if intersections < 0.0 {
        return Err(Error::InvalidInput(format!(
            "intersection count must be nonnegative, got {intersections}"
        )));
    }
    Ok(intersections / action)
}

/// One orbit's data fed to the inequality evaluator.
#[derive(Debug, Clone)]
pub struct RatioEntry {
    pub label: String,
    pub intersections: f64,
    pub action: f64,
}

impl RatioEntry {
    pub fn new(label: impl Into<String>, intersections: f64, action: f64) -> Self {
        Self {
            label: label.into(),
            intersections,
            action,
        }
    }
}

/// Where one orbit's ratio sits relative to the area/volume threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioVerdict {
    /// Strictly below threshold (beyond tolerance): the strict hypothesis holds.
    StrictlyBelow,
    /// Equal to the threshold within tolerance; the boundary case.
    EqualWithinTol,
    /// Strictly above threshold (beyond tolerance).
    Above,
}

impl std::fmt::Display for RatioVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RatioVerdict::StrictlyBelow => write!(f, "below"),
            RatioVerdict::EqualWithinTol => write!(f, "equality within tol"),
            RatioVerdict::Above => write!(f, "above"),
        }
    }
}

/// Per-orbit row of the main inequality report.
#[derive(Debug, Clone)]
pub struct RatioRow {
    pub label: String,
    pub action: f64,
    pub intersections: f64,
    pub ratio: f64,
    pub verdict: RatioVerdict,
}

/// Outcome of evaluating the frequency inequality on a list of orbits.
#[derive(Debug, Clone)]
pub struct MainInequalityReport {
    /// `area / volume`.
    pub threshold: f64,
    /// Supremum of the ratios; `None` for an empty orbit list.
    pub sup_ratio: Option<f64>,
    pub rows: Vec<RatioRow>,
    /// True when every orbit satisfies the strict inequality `ratio < threshold`.
    pub strict_hypothesis_holds: bool,
    /// True when some orbit sits on the threshold within tolerance.
    pub any_equality: bool,
    /// True when some orbit witnesses `ratio >= threshold` (within tolerance).
    pub lower_bound_witnessed: bool,
    pub tol: f64,
}

/// Compare every orbit's crossing frequency against `area / volume`.
///
/// `tol` is the absolute tolerance deciding equality versus strict inequality;
/// the model ellipsoid examples sit exactly on the boundary case, so the
/// report states equalities explicitly rather than resolving them by fiat.
pub fn evaluate_main_inequality(
    orbits: &[RatioEntry],
    area: f64,
    volume: f64,
    tol: f64,
) -> Result<MainInequalityReport> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::InvalidInput(format!(
            "volume must be positive and finite, got {volume}"
        )));
    }
    if !(area > 0.0) || !area.is_finite() {
        return Err(Error::InvalidInput(format!(
            "area must be positive and finite, got {area}"
        )));
    }
    let threshold = area / volume;
    let mut rows = Vec::with_capacity(orbits.len());
    let mut sup: Option<f64> = None;
    let mut any_equality = false;
    let mut all_strictly_below = true;
    for entry in orbits {
        let ratio = frequency_ratio(entry.intersections, entry.action)?;
        let verdict = if (ratio - threshold).abs() <= tol {
            any_equality = true;
            all_strictly_below = false;
            RatioVerdict::EqualWithinTol
        } else if ratio < threshold {
            RatioVerdict::StrictlyBelow
        } else {
            all_strictly_below = false;
            RatioVerdict::Above
        };
        sup = Some(sup.map_or(ratio, |s: f64| s.max(ratio)));
        rows.push(RatioRow {
            label: entry.label.clone(),
            action: entry.action,
            intersections: entry.intersections,
            ratio,
            verdict,
        });
    }
    let lower_bound_witnessed = sup.is_some_and(|s| s >= threshold - tol);
    Ok(MainInequalityReport {
        threshold,
        sup_ratio: sup,
        rows,
        strict_hypothesis_holds: all_strictly_below && !orbits.is_empty(),
        any_equality,
        lower_bound_witnessed,
        tol,
    })
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn gamma1() -> SimpleOrbit {
        SimpleOrbit::new("gamma1", 1.0, 1.0 / SQRT2, true).unwrap()
    }

    fn gamma2() -> SimpleOrbit {
        SimpleOrbit::new("gamma2", SQRT2, SQRT2, true).unwrap()
    }

    #[test]
    fn rot_sigma_matches_ellipsoid_line_class() {
        // (p, q) = (1, 1) surface on the (1, sqrt2) ellipsoid: the boundary
        // covers gamma1 with degree -1 and conormal winding 1.
        let inc = BoundaryIncidence::new(gamma1(), 1, -1, 1).unwrap();
        assert_relative_eq!(inc.rot_sigma(), 1.0 / SQRT2 - 1.0, epsilon = 1e-15);
        assert_relative_eq!(inc.rot_sigma(), -0.292_893_218_813_452_5, epsilon = 1e-8);

        let inc2 = BoundaryIncidence::new(gamma2(), 1, 1, 1).unwrap();
        assert_relative_eq!(inc2.rot_sigma(), SQRT2 - 1.0, epsilon = 1e-15);
        assert_relative_eq!(inc2.rot_sigma(), 0.414_213_562_373_095, epsilon = 1e-8);
    }

    #[test]
    fn rot_sigma_zero_conormal_winding() {
        let inc = BoundaryIncidence::new(
            SimpleOrbit::new("g", 2.0, 0.75, true).unwrap(),
            1,
            1,
            0,
        )
        .unwrap();
        assert_eq!(inc.rot_sigma(), 0.75);
    }

    #[test]
    fn rot_sigma_rejects_zero_degree() {
        assert!(BoundaryIncidence::new(gamma1(), 1, 0, 1).is_err());
    }

    #[test]
    fn rot_sigma_rejects_non_coprime_data() {
        assert!(BoundaryIncidence::new(gamma1(), 1, 2, 4).is_err());
    }

    #[test]
    fn rot_sigma_invariant_under_trivialization_change() {
        // rot_tau -> rot_tau + n together with p_tau -> p_tau + n*|q|.
        let base = BoundaryIncidence::new(gamma2(), 1, 3, 2).unwrap();
        for n in [-3i64, -1, 1, 2, 5] {
            let orbit = SimpleOrbit::new("gamma2", SQRT2, SQRT2 + n as f64, true).unwrap();
            let shifted = BoundaryIncidence::new(orbit, 1, 3, 2 + n * 3).unwrap();
            assert_relative_eq!(shifted.rot_sigma(), base.rot_sigma(), epsilon = 1e-12);
        }
    }

    #[test]
    fn intersection_number_reproduces_ellipsoid_values() {
        let inc1 = BoundaryIncidence::new(gamma1(), 1, -1, 1).unwrap();
        // (b*q - a*p)/b with a=1, b=sqrt2, p=q=1
        assert_relative_eq!(
            inc1.intersection_number().unwrap(),
            (SQRT2 - 1.0) / SQRT2,
            epsilon = 1e-15
        );

        // disk page: boundary gamma1 with degree 1 and no conormal winding
        let disk = BoundaryIncidence::new(gamma1(), 1, 1, 0).unwrap();
        assert_relative_eq!(disk.intersection_number().unwrap(), 1.0 / SQRT2, epsilon = 1e-15);

        let unit = BoundaryIncidence::new(
            SimpleOrbit::new("u", 1.0, 1.0, true).unwrap(),
            1,
            1,
            0,
        )
        .unwrap();
        assert_relative_eq!(unit.intersection_number().unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn intersection_number_sign_consistency() {
        // positive exactly when sign(rot_sigma) == sign(q)
        let bad = BoundaryIncidence::new(gamma1(), 1, 1, 1).unwrap(); // rot_sigma < 0, q > 0
        assert!(bad.intersection_number().is_err());
        let good = BoundaryIncidence::new(gamma1(), 1, -1, 1).unwrap();
        assert!(good.intersection_number().unwrap() > 0.0);
    }

    #[test]
    fn frequency_ratio_examples() {
        assert_relative_eq!(
            frequency_ratio(SQRT2 - 1.0, SQRT2).unwrap(),
            1.0 - 1.0 / SQRT2,
            epsilon = 1e-15
        );
        assert_eq!(frequency_ratio(0.0, 3.0).unwrap(), 0.0);
        assert_relative_eq!(frequency_ratio(1.0, SQRT2).unwrap(), 1.0 / SQRT2, epsilon = 1e-15);
        assert!(frequency_ratio(1.0, 0.0).is_err());
        assert!(frequency_ratio(1.0, -2.0).is_err());
    }

    #[test]
    fn frequency_ratio_scales_inversely_with_form_scaling() {
        // under lambda -> r*lambda the action scales by r, crossings do not
        let base = frequency_ratio(0.75, 2.0).unwrap();
        for r in [0.5, 2.0, 7.3] {
            let scaled = frequency_ratio(0.75, 2.0 * r).unwrap();
            assert_relative_eq!(scaled, base / r, epsilon = 1e-14);
        }
    }

    #[test]
    fn main_inequality_on_line_class_data() {
        // both orbit ratios equal the threshold: equality case
        let orbits = vec![
            RatioEntry::new("gamma1", (SQRT2 - 1.0) / SQRT2, 1.0),
            RatioEntry::new("gamma2", SQRT2 - 1.0, SQRT2),
        ];
        let report = evaluate_main_inequality(&orbits, SQRT2 - 1.0, SQRT2, 1e-12).unwrap();
        assert_relative_eq!(report.threshold, (SQRT2 - 1.0) / SQRT2, epsilon = 1e-15);
        assert_relative_eq!(report.sup_ratio.unwrap(), report.threshold, epsilon = 1e-13);
        assert!(report.any_equality);
        assert!(!report.strict_hypothesis_holds);
        assert!(report.lower_bound_witnessed);
        for row in &report.rows {
            assert_eq!(row.verdict, RatioVerdict::EqualWithinTol);
        }
    }

    #[test]
    fn main_inequality_on_disk_data() {
        let orbits = vec![
            RatioEntry::new("gamma1", 1.0 / SQRT2, 1.0),
            RatioEntry::new("gamma2", 1.0, SQRT2),
        ];
        let report = evaluate_main_inequality(&orbits, 1.0, SQRT2, 1e-12).unwrap();
        assert_relative_eq!(report.threshold, 1.0 / SQRT2, epsilon = 1e-15);
        for row in &report.rows {
            assert_relative_eq!(row.ratio, 1.0 / SQRT2, epsilon = 1e-13);
            assert_eq!(row.verdict, RatioVerdict::EqualWithinTol);
        }
    }

    #[test]
    fn main_inequality_trivial_and_empty_cases() {
        let report =
            evaluate_main_inequality(&[RatioEntry::new("o", 0.0, 1.0)], 1.0, 1.0, 1e-12).unwrap();
        assert_eq!(report.sup_ratio, Some(0.0));
        assert!(report.strict_hypothesis_holds);
        assert!(!report.lower_bound_witnessed);

        let empty = evaluate_main_inequality(&[], 1.0, 1.0, 1e-12).unwrap();
        assert_eq!(empty.sup_ratio, None);
        assert!(!empty.lower_bound_witnessed);
        assert!(!empty.strict_hypothesis_holds);
    }
}
