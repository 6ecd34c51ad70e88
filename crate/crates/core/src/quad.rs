//! Adaptive quadrature on Gauss-Kronrod 7-15 panels.
//!
//! A panel is accepted when the Kronrod/Gauss discrepancy is below the
//! absolute tolerance allotted to it; otherwise it is bisected. Tolerance is
//! distributed proportionally to panel width, so the global error estimate is
//! additive across panels.

use crate::error::{Error, Result};

/// Kronrod abscissae on [0, 1] of the positive half (center first).
const XK: [f64; 8] = [
    0.0,
    0.207_784_955_007_898_5,
    0.405_845_151_377_397_2,
    0.586_087_235_467_691_1,
    0.741_531_185_599_394_4,
    0.864_864_423_359_769_1,
    0.949_107_912_342_758_5,
    0.991_455_371_120_812_6,
];

/// Kronrod weights matching `XK`.
const WK: [f64; 8] = [
    0.209_482_141_084_727_8,
    0.204_432_940_075_298_9,
    0.190_350_578_064_785_4,
    0.169_004_726_639_267_9,
    0.140_653_259_715_525_9,
    0.104_790_010_322_250_3,
    0.063_092_092_629_978_55,
    0.022_935_322_010_529_22,
];

/// Gauss weights for the embedded 7-point rule (nodes `XK[0], XK[2], XK[4], XK[6]`).
const WG: [f64; 4] = [
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_9,
    0.279_705_391_489_276_7,
    0.129_484_966_168_869_7,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = WK[0] * fc;
    let mut gauss = WG[0] * fc;
    for i in 1..8 {
        let dx = half * XK[i];
        let fsum = f(mid - dx) + f(mid + dx);
        kron += WK[i] * fsum;
        if i % 2 == 0 {
            gauss += WG[i / 2] * fsum;
        }
    }
    kron *= half;
    gauss *= half;
    (kron, (kron - gauss).abs())
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("quadrature tolerance must be > 0".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut worst = 0.0_f64;
    // stack of (a, b, tol, depth); a few levels are always forced so that a
    // kink cannot hide in the error estimate of one wide panel
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((lo, hi, t, depth)) = stack.pop() {
        let (value, err) = gk15(&f, lo, hi);
        if (err <= t && depth >= 3) || (hi - lo).abs() < 1e-15 * (b - a).abs() {
            if err > t {
                worst = worst.max(err);
            }
            total += value;
        } else if depth >= 52 {
            return Err(Error::QuadratureNoConvergence {
                requested: tol,
                achieved: err,
            });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * t, depth + 1));
            stack.push((mid, hi, 0.5 * t, depth + 1));
        }
    }
    if worst > tol {
        return Err(Error::QuadratureNoConvergence {
            requested: tol,
            achieved: worst,
        });
    }
    Ok(total)
}

/// As [`integrate`], for integrands that can themselves fail (nested
/// quadratures, path integrals).
pub fn integrate_nested<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("quadrature tolerance must be > 0".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let gk15_nested = |lo: f64, hi: f64| -> Result<(f64, f64)> {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (lo + hi);
        let fc = f(mid)?;
        let mut kron = WK[0] * fc;
        let mut gauss = WG[0] * fc;
        for i in 1..8 {
            let dx = half * XK[i];
            let fsum = f(mid - dx)? + f(mid + dx)?;
            kron += WK[i] * fsum;
            if i % 2 == 0 {
                gauss += WG[i / 2] * fsum;
            }
        }
        Ok((kron * half, (half * (kron - gauss)).abs()))
    };
    let mut total = 0.0;
    let mut worst = 0.0_f64;
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((lo, hi, t, depth)) = stack.pop() {
        let (value, err) = gk15_nested(lo, hi)?;
        if (err <= t && depth >= 3) || (hi - lo).abs() < 1e-15 * (b - a).abs() {
            if err > t {
                worst = worst.max(err);
            }
            total += value;
        } else if depth >= 52 {
            return Err(Error::QuadratureNoConvergence {
                requested: tol,
                achieved: err,
            });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * t, depth + 1));
            stack.push((mid, hi, 0.5 * t, depth + 1));
        }
    }
    if worst > tol {
        return Err(Error::QuadratureNoConvergence {
            requested: tol,
            achieved: worst,
        });
    }
    Ok(total)
}

/// Integral of a periodic function over one period `[0, period]`.
///
/// Trapezoid sums converge spectrally for smooth periodic integrands; the node
/// count is doubled until two consecutive refinements agree to `tol`.
pub fn integrate_periodic<F: Fn(f64) -> f64>(f: F, period: f64, tol: f64) -> Result<f64> {
    let mut n = 16usize;
    let mut prev = trapezoid_periodic(&f, period, n);
    for _ in 0..16 {
        n *= 2;
        let next = trapezoid_periodic(&f, period, n);
        if (next - prev).abs() <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNoConvergence {
        requested: tol,
        achieved: f64::NAN,
    })
}

fn trapezoid_periodic<F: Fn(f64) -> f64>(f: &F, period: f64, n: usize) -> f64 {
    let h = period / n as f64;
    (0..n).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// As [`integrate_periodic`], for fallible integrands.
pub fn integrate_periodic_nested<F: Fn(f64) -> Result<f64>>(
    f: F,
    period: f64,
    tol: f64,
) -> Result<f64> {
    let trapezoid = |n: usize| -> Result<f64> {
        let h = period / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            acc += f(i as f64 * h)?;
        }
        Ok(acc * h)
    };
    let mut n = 16usize;
    let mut prev = trapezoid(n)?;
    for _ in 0..16 {
        n *= 2;
        let next = trapezoid(n)?;
        if (next - prev).abs() <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNoConvergence {
        requested: tol,
        achieved: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-13).unwrap();
        assert_relative_eq!(v, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn oscillatory_integral() {
        let v = integrate(|x| (10.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        let exact = (1.0 - (10.0 * std::f64::consts::PI).cos()) / 10.0;
        assert_relative_eq!(v, exact, epsilon = 1e-11);
    }

    #[test]
    fn kink_is_handled_by_subdivision() {
        let v = integrate(|x| (x - 0.3).abs(), 0.0, 1.0, 1e-12).unwrap();
        let exact = 0.5 * (0.3f64.powi(2) + 0.7f64.powi(2));
        assert_relative_eq!(v, exact, epsilon = 1e-11);
    }

    #[test]
    fn periodic_rule_is_spectral() {
        let v = integrate_periodic(|t| (t.sin()).exp(), 2.0 * std::f64::consts::PI, 1e-13).unwrap();
        // 2*pi*I_0(1), modified Bessel
        assert_relative_eq!(v, 7.954_926_521_012_844_7, epsilon = 1e-11);
    }

    #[test]
    fn zero_width_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, 1e-12).unwrap(), 0.0);
    }
}
