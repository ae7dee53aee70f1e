//! Parameter-independent geometry of complex curves: arc length, angle,
//! curvature and the one-sided curvature change, plus the Schwarzian
//! derivative and the analytic curve with {z, w} = γ + δ ln w.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::diff::{fd_derivative, one_sided_derivatives, Side};

/// Geometric invariants of a curve at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveInvariants {
    pub z0: Complex64,
    /// Angle of the tangent, arg z′.
    pub chi: f64,
    /// Curvature dχ/dl = Im(z″/z′)/|z′|.
    pub dchi_dl: f64,
    /// d²χ/dl² = Im{z, w}/|z′|² from the right.
    pub d2chi_dl2_plus: f64,
    /// The same from the left.
    pub d2chi_dl2_minus: f64,
}

fn check_step(s: f64, h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) || s + h == s || h < 64.0 * f64::EPSILON * s.abs() {
        return Err(Error::Accuracy {
            reason: format!("finite-difference step {h:e} underflows at parameter {s:e}"),
            estimate: f64::NAN,
            error: f64::INFINITY,
        });
    }
    Ok(())
}

fn schwarzian_from(d1: Complex64, d2: Complex64, d3: Complex64) -> Result<Complex64> {
    if d1.norm() == 0.0 || !d1.norm().is_finite() {
        return Err(Error::singular("z′ vanishes; the Schwarzian is undefined"));
    }
    let r = d2 / d1;
    Ok(d3 / d1 - 1.5 * r * r)
}

/// Invariants at parameter `s` from seven-point one-sided stencils of step
/// `h` on each side. The angle and curvature are averaged over the two
/// sides; the curvature change is reported per side, since it may jump.
pub fn curve_invariants_numeric<F: Fn(f64) -> Complex64>(curve: F, s: f64, h: f64) -> Result<CurveInvariants> {
    check_step(s, h)?;
    let [r1, r2, r3] = one_sided_derivatives(&curve, s, h, Side::Right);
    let [l1, l2, l3] = one_sided_derivatives(&curve, s, h, Side::Left);
    let side = |d1: Complex64, d2: Complex64, d3: Complex64| -> Result<(f64, f64, f64)> {
        let sch = schwarzian_from(d1, d2, d3)?;
        let speed = d1.norm();
        Ok((d1.arg(), (d2 / d1).im / speed, sch.im / (speed * speed)))
    };
    let (chi_r, k_r, dk_r) = side(r1, r2, r3)?;
    let (chi_l, k_l, dk_l) = side(l1, l2, l3)?;
    Ok(CurveInvariants {
        z0: curve(s),
        chi: 0.5 * (chi_r + chi_l),
        dchi_dl: 0.5 * (k_r + k_l),
        d2chi_dl2_plus: dk_r,
        d2chi_dl2_minus: dk_l,
    })
}

/// {z, w} = z‴/z′ − (3/2)(z″/z′)² from central differences of step `h`.
pub fn schwarzian<F: Fn(f64) -> Complex64>(z: F, w: f64, h: f64) -> Result<Complex64> {
    check_step(w, h)?;
    let d1 = fd_derivative(&z, w, 1, h);
    let d2 = fd_derivative(&z, w, 2, h);
    let d3 = fd_derivative(&z, w, 3, h);
    schwarzian_from(d1, d2, d3)
}

/// z(w) = z₀ + w + iβw² + (δ/6)w³ ln w + Qw³, the local solution of
/// {z, w} = γ + δ ln w with z′(0) = 1. The logarithm is taken on the lower
/// half plane: ln w = ln|w| − iπ for w < 0. With `cubic` off the Qw³ term
/// is dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticCurve {
    pub z0: Complex64,
    pub beta_curve: f64,
    pub gamma: Complex64,
    pub delta: f64,
    pub cubic: bool,
}

impl AnalyticCurve {
    /// β = γ = 0 with the cubic term dropped.
    pub fn new(z0: Complex64, delta: f64) -> Self {
        Self {
            z0,
            beta_curve: 0.0,
            gamma: Complex64::new(0.0, 0.0),
            delta,
            cubic: false,
        }
    }

    pub fn with_beta_curve(mut self, beta: f64) -> Self {
        self.beta_curve = beta;
        self
    }

    pub fn with_gamma(mut self, gamma: Complex64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_cubic(mut self, on: bool) -> Self {
        self.cubic = on;
        self
    }

    /// Q = −β² + γ/6 − 11δ/36, or 0 with the cubic term off.
    pub fn q(&self) -> Complex64 {
        if self.cubic {
            Complex64::new(-self.beta_curve * self.beta_curve - 11.0 * self.delta / 36.0, 0.0) + self.gamma / 6.0
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    fn log(w: f64) -> Complex64 {
        if w > 0.0 {
            Complex64::new(w.ln(), 0.0)
        } else {
            Complex64::new((-w).ln(), -std::f64::consts::PI)
        }
    }

    pub fn eval(&self, w: f64) -> Complex64 {
        let i = Complex64::i();
        let mut z = self.z0 + w + i * self.beta_curve * w * w + self.q() * w.powi(3);
        if w != 0.0 {
            z += self.delta / 6.0 * w.powi(3) * Self::log(w);
        }
        z
    }

    /// z′, z″ and z‴ in closed form. Undefined at w = 0 through ln w in z‴.
    pub fn derivatives(&self, w: f64) -> [Complex64; 3] {
        let i = Complex64::i();
        let q = self.q();
        let d = self.delta;
        let (l1, l2, l3) = if w == 0.0 {
            (
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(f64::NEG_INFINITY, 0.0),
            )
        } else {
            let l = Self::log(w);
            (
                d / 6.0 * w * w * (3.0 * l + 1.0),
                d / 6.0 * w * (6.0 * l + 5.0),
                d / 6.0 * (6.0 * l + 11.0),
            )
        };
        [
            1.0 + 2.0 * i * self.beta_curve * w + 3.0 * q * w * w + l1,
            2.0 * i * self.beta_curve + 6.0 * q * w + l2,
            6.0 * q + l3,
        ]
    }

    pub fn schwarzian(&self, w: f64) -> Result<Complex64> {
        let [d1, d2, d3] = self.derivatives(w);
        schwarzian_from(d1, d2, d3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn circle_has_constant_curvature() {
        let r = 2.5;
        let inv = curve_invariants_numeric(|w| r * Complex64::new(0.0, w).exp(), 0.7, 1e-2).unwrap();
        assert!((inv.dchi_dl - 1.0 / r).abs() < 1e-8, "{}", inv.dchi_dl);
        assert!(inv.d2chi_dl2_plus.abs() < 1e-7);
        assert!(inv.d2chi_dl2_minus.abs() < 1e-7);
    }

    #[test]
    fn straight_line_is_flat() {
        let inv = curve_invariants_numeric(|w| c(1.0, 2.0) + c(3.0, -1.0) * w, 0.4, 1e-2).unwrap();
        assert!((inv.chi - (-1.0f64).atan2(3.0)).abs() < 1e-12);
        assert!(inv.dchi_dl.abs() < 1e-10);
        assert!(inv.d2chi_dl2_plus.abs() < 1e-7 && inv.d2chi_dl2_minus.abs() < 1e-7);
    }

    #[test]
    fn step_underflow_is_an_accuracy_error() {
        let r = curve_invariants_numeric(|w| c(w, 0.0), 1e10, 1e-9);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
        assert!(matches!(
            schwarzian(|w| c(w, 0.0), 0.0, 0.0),
            Err(Error::Accuracy { .. })
        ));
    }

    #[test]
    fn mobius_schwarzian_vanishes() {
        let (a, b, cc, d) = (c(1.0, 0.5), c(-0.3, 2.0), c(0.2, -0.1), c(1.0, 0.3));
        let s = schwarzian(|w| (a * w + b) / (cc * w + d), 0.4, 1e-2).unwrap();
        assert!(s.norm() < 1e-7, "{s}");
    }

    #[test]
    fn exponential_and_square() {
        let s = schwarzian(|w| c(w, 0.0).exp(), 0.3, 1e-2).unwrap();
        assert!((s - c(-0.5, 0.0)).norm() < 1e-8);
        let s = schwarzian(|w| c(w * w, 0.0), 1.0, 1e-2).unwrap();
        assert!((s - c(-1.5, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn constant_map_is_singular() {
        assert!(matches!(
            schwarzian(|_| c(1.0, 1.0), 0.0, 1e-2),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let z = AnalyticCurve::new(c(0.0, -3.0), 0.7)
            .with_beta_curve(0.2)
            .with_gamma(c(0.1, 0.35 * PI))
            .with_cubic(true);
        for w in [0.3, -0.4] {
            let [d1, d2, d3] = z.derivatives(w);
            let h = 1e-2;
            assert!((d1 - fd_derivative(|x| z.eval(x), w, 1, h)).norm() < 1e-9);
            assert!((d2 - fd_derivative(|x| z.eval(x), w, 2, h)).norm() < 1e-8);
            assert!((d3 - fd_derivative(|x| z.eval(x), w, 3, h)).norm() < 1e-6);
        }
    }

    #[test]
    fn analytic_curve_solves_log_schwarzian_near_origin() {
        let gamma = c(0.2, 0.5);
        let delta = 0.8;
        let z = AnalyticCurve::new(c(0.0, 0.0), delta)
            .with_beta_curve(0.3)
            .with_gamma(gamma)
            .with_cubic(true);
        for w in [1e-6, -1e-6] {
            let s = z.schwarzian(w).unwrap();
            let target = gamma + delta * AnalyticCurve::log(w);
            assert!((s - target).norm() < 1e-4, "{w}: {s} vs {target}");
        }
        // The lower-half-plane branch makes Im{z, w} drop by πδ across 0.
        let jump = z.schwarzian(1e-8).unwrap().im - z.schwarzian(-1e-8).unwrap().im;
        assert!((jump - PI * delta).abs() < 1e-5);
    }

    #[test]
    fn default_curve_drops_cubic() {
        let z = AnalyticCurve::new(c(0.0, 0.0), 1.0);
        assert_eq!(z.q(), c(0.0, 0.0));
        assert_eq!(z.eval(0.0), c(0.0, 0.0));
    }
}
