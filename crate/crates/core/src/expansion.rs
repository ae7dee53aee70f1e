//! Friedmann dynamics with buoyant densities, and conformal time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::history::{ExpansionHistory, HistoryState};
use crate::numerics::{fd_derivative, integrate};
use crate::params::{CosmologyParams, HubbleModel};

/// A perfect fluid with constant equation of state p = wε.
///
/// Densities are in units of the critical density 3H₀²/(8πG), so `rho0`
/// is the fluid's Ω.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluidSpec {
    pub name: String,
    pub w: f64,
    pub rho0: f64,
}

impl FluidSpec {
    pub fn new(name: impl Into<String>, w: f64, rho0: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&w) {
            return Err(Error::domain(format!("equation of state w = {w} outside [−1, 1]")));
        }
        Ok(Self {
            name: name.into(),
            w,
            rho0,
        })
    }

    pub fn matter(rho0: f64) -> Self {
        Self {
            name: "matter".into(),
            w: 0.0,
            rho0,
        }
    }

    pub fn radiation(rho0: f64) -> Self {
        Self {
            name: "radiation".into(),
            w: 1.0 / 3.0,
            rho0,
        }
    }

    pub fn lambda(rho0: f64) -> Self {
        Self {
            name: "lambda".into(),
            w: -1.0,
            rho0,
        }
    }

    /// ρ(a) = ρ₀ a^{−3(1+w)}.
    pub fn density(&self, a: f64) -> f64 {
        self.rho0 * a.powf(-3.0 * (1.0 + self.w))
    }
}

/// ρ/(1 + 3(1+w)κ): the part of a fluid's density that is not compensated
/// by the vacuum it displaces.
pub fn buoyant_density(rho: f64, w: f64, kappa: f64) -> Result<f64> {
    let den = 1.0 + 3.0 * (1.0 + w) * kappa;
    if !(den > 0.0) {
        return Err(Error::domain(format!("1 + 3(1+w)κ = {den} must be positive")));
    }
    Ok(rho / den)
}

/// A fluid's buoyant density as a function of the scale factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuoyantDensity {
    pub fluid: FluidSpec,
    pub kappa: f64,
}

impl BuoyantDensity {
    pub fn new(fluid: FluidSpec, kappa: f64) -> Result<Self> {
        buoyant_density(1.0, fluid.w, kappa)?;
        Ok(Self { fluid, kappa })
    }

    pub fn effective(&self, a: f64) -> f64 {
        self.fluid.density(a) / (1.0 + 3.0 * (1.0 + self.fluid.w) * self.kappa)
    }
}

/// ϱ − κa∂ₐϱ − ρ(a) for the buoyant density ϱ.
///
/// ϱ solves this equation, so the residual is zero up to the
/// finite-difference error of ∂ₐ.
pub fn buoyancy_ode_residual(fluid: &FluidSpec, kappa: f64, a: f64) -> Result<f64> {
    buoyancy_ode_residual_with_homogeneous(fluid, kappa, a, 0.0)
}

/// As [`buoyancy_ode_residual`] for ϱ + ε·a^{1/κ}.
///
/// The homogeneous term satisfies ϱ = κa∂ₐϱ on its own, so it leaves the
/// residual unchanged. It is dropped from physical solutions because a
/// density cannot grow like a^{1/κ} with expansion.
pub fn buoyancy_ode_residual_with_homogeneous(fluid: &FluidSpec, kappa: f64, a: f64, epsilon: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("scale factor must be positive, got {a}")));
    }
    let b = BuoyantDensity::new(fluid.clone(), kappa)?;
    let rho = fluid.density(a);
    if kappa == 0.0 {
        return Ok(b.effective(a) - rho);
    }
    let varrho = |x: f64| b.effective(x) + epsilon * x.powf(1.0 / kappa);
    let d = fd_derivative(varrho, a, 1, 1e-2 * a);
    Ok(varrho(a) - kappa * a * d - rho)
}

/// H²(a) in 1/s² for the ΛCDM or buoyancy-modified model.
pub fn hubble_squared(a: f64, params: &CosmologyParams, modified: bool) -> Result<f64> {
    HubbleModel::from_params(params, params.h0, modified)?.hubble_squared(a)
}

/// ε̇ + 3(ε + p)H with ε̇ by finite differences.
///
/// The step is 10⁻³ of the expansion time 1/H(t), or 10⁻³·max(|t|, 1)
/// for a static medium.
pub fn friedmann_thermo_residual<E, P, H>(epsilon: E, pressure: P, hubble: H, t: f64) -> f64
where
    E: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    let h = hubble(t);
    let step = if h != 0.0 {
        1e-3 / h.abs()
    } else {
        1e-3 * t.abs().max(1.0)
    };
    let eps_dot = fd_derivative(&epsilon, t, 1, step);
    eps_dot + 3.0 * (epsilon(t) + pressure(t)) * h
}

/// ä/a = Ḣ + H² in 1/s².
pub fn deceleration(a: f64, params: &CosmologyParams, modified: bool) -> Result<f64> {
    let model = HubbleModel::from_params(params, params.h0, modified)?;
    Ok(model.hubble_dot(a) + model.hubble_squared(a)?)
}

/// ä/a = −(4πG/3c²)(ε + 3p) summed over the fluids, including the buoyant
/// vacuum contributions. Cross-check for [`deceleration`].
pub fn deceleration_from_pressure(a: f64, params: &CosmologyParams, modified: bool) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("scale factor must be positive, got {a}")));
    }
    Ok(HubbleModel::from_params(params, params.h0, modified)?.acceleration_from_pressure(a))
}

/// Relative tolerance of the conformal-time quadrature.
pub const CONFORMAL_RTOL: f64 = 1e-13;

/// τ = ∫_{t1}^{t2} dt/a(t).
pub fn conformal_time(history: &ExpansionHistory, t1: f64, t2: f64) -> Result<f64> {
    if t1 == t2 {
        return Ok(0.0);
    }
    if t1 > t2 {
        return conformal_time(history, t2, t1).map(|v| -v);
    }
    history.state(t1)?;
    history.state(t2)?;
    let r = integrate(
        |t| history.a(t).map(|a| 1.0 / a).unwrap_or(f64::NAN),
        t1,
        t2,
        CONFORMAL_RTOL,
    )?;
    Ok(r.value)
}

/// The first two terms of τ(θ) about the midpoint: θ/a + (H² − Ḣ)θ³/(24a).
///
/// The expansion is odd in θ, so the remainder is O(θ⁵).
pub fn conformal_time_series(mid: &HistoryState, theta: f64) -> f64 {
    theta / mid.a + (mid.h * mid.h - mid.h_dot) * theta.powi(3) / (24.0 * mid.a)
}
