//! Conformal time with the Hubble rate truncated at first order, and the
//! η parametrization of the same series.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::history::{ExpansionHistory, HistoryState};
use crate::numerics::quad::integrate;

/// Largest |Hθ| the truncated series is evaluated at.
pub const MAX_H_THETA: f64 = 0.5;

/// The piecewise series τ(θ) = θ/a + (H² − Ḣ)θ³/(24a) ± Ḧθ⁴/(24a),
/// with the sign of the quartic term following the sign of θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedTau {
    pub a: f64,
    pub h: f64,
    pub h_dot: f64,
    pub h_ddot: f64,
    pub c1: f64,
    pub c3: f64,
    pub c4: f64,
}

impl TruncatedTau {
    pub fn from_state(s: HistoryState) -> Self {
        Self {
            a: s.a,
            h: s.h,
            h_dot: s.h_dot,
            h_ddot: s.h_ddot,
            c1: 1.0 / s.a,
            c3: (s.h * s.h - s.h_dot) / (24.0 * s.a),
            c4: s.h_ddot / (24.0 * s.a),
        }
    }

    pub fn at(history: &ExpansionHistory, t: f64) -> Result<Self> {
        history.state(t).map(Self::from_state)
    }

    /// Evaluates the series. Odd in θ by construction.
    pub fn eval(&self, theta: f64) -> Result<f64> {
        check_theta(self.h, theta)?;
        let t2 = theta * theta;
        Ok(theta * (self.c1 + self.c3 * t2) + theta.signum() * self.c4 * t2 * t2)
    }
}

fn check_theta(h: f64, theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::domain(format!("θ must be finite, got {theta}")));
    }
    if (h * theta).abs() >= MAX_H_THETA {
        return Err(Error::domain(format!(
            "|Hθ| = {:.3} exceeds the truncation limit {MAX_H_THETA}",
            (h * theta).abs()
        )));
    }
    Ok(())
}

/// τ(θ) at midpoint time `t` from the truncated series.
pub fn truncated_tau(history: &ExpansionHistory, t: f64, theta: f64) -> Result<f64> {
    TruncatedTau::at(history, t)?.eval(theta)
}

/// τ(θ) from ∫ ds / a(s) with H(s) replaced by H(t₁) + Ḣ(t₁)(s − t₁), where
/// t₁ is the earlier of the two endpoints t ∓ θ/2. The scale factor is then
/// a(t₁)·exp(H₁u + Ḣ₁u²/2) with u = s − t₁. Negative θ reverses the
/// orientation, so the result is odd in θ.
pub fn truncated_tau_exact(history: &ExpansionHistory, t: f64, theta: f64) -> Result<f64> {
    let mid = history.state(t)?;
    check_theta(mid.h, theta)?;
    if theta == 0.0 {
        return Ok(0.0);
    }
    let span = theta.abs();
    let s1 = history.state(t - span / 2.0)?;
    let f = |u: f64| 1.0 / (s1.a * (s1.h * u + 0.5 * s1.h_dot * u * u).exp());
    let v = integrate(f, 0.0, span, 1e-14)?.value;
    Ok(theta.signum() * v)
}

/// η(θ) = 1 + Ḣθ²/24 − Ḧ|θ|³/24.
pub fn eta_parameter(history: &ExpansionHistory, t: f64, theta: f64) -> Result<f64> {
    let s = history.state(t)?;
    check_theta(s.h, theta)?;
    Ok(eta_from_state(&s, theta))
}

fn eta_from_state(s: &HistoryState, theta: f64) -> f64 {
    let t2 = theta * theta;
    1.0 + s.h_dot * t2 / 24.0 - s.h_ddot * t2 * theta.abs() / 24.0
}

/// The complex curve θ* = θ − 2πiη(θ)/H for one instant of a history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaStarCurve {
    state: HistoryState,
}

impl ThetaStarCurve {
    pub fn at(history: &ExpansionHistory, t: f64) -> Result<Self> {
        let state = history.state(t)?;
        if state.h == 0.0 {
            return Err(Error::singular("θ* curve needs H ≠ 0"));
        }
        Ok(Self { state })
    }

    pub fn state(&self) -> HistoryState {
        self.state
    }

    /// Point on the curve. The series guard is not applied so that
    /// finite-difference stencils can straddle any θ.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let eta = eta_from_state(&self.state, theta);
        Complex64::new(theta, -2.0 * std::f64::consts::PI * eta / self.state.h)
    }
}

pub fn theta_star_curve(history: &ExpansionHistory, t: f64, theta: f64) -> Result<Complex64> {
    let curve = ThetaStarCurve::at(history, t)?;
    check_theta(curve.state.h, theta)?;
    Ok(curve.eval(theta))
}
