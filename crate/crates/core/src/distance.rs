//! Conformal distance to last scattering and the Hubble-tension fit.
//!
//! The buoyancy-modified model must place the last-scattering surface at
//! the same conformal distance as ΛCDM, since the acoustic angular scale
//! φ ∼ λ/d is what the microwave background measures. That condition fixes
//! Ω∞ for each κ; the Hubble rate today then follows, and inverting it for
//! the locally measured rate fixes κ and with it the cutoff length ℓ.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{PhysicalConstants, GLY_M};
use crate::error::{Error, Result};
use crate::numerics::{brent_root, hyp2f1, integrate_with, EndpointHint, QuadOptions};
use crate::params::{CosmologyParams, HubbleModel};

/// A length in metres.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Distance {
    pub metres: f64,
}

impl Distance {
    pub fn from_gly(gly: f64) -> Self {
        Self { metres: gly * GLY_M }
    }

    pub fn gly(self) -> f64 {
        self.metres / GLY_M
    }
}

/// κ = (8/9π)(ℓ_P/ℓ)².
pub fn kappa_from_cutoff(ell_over_lp: f64) -> f64 {
    8.0 / (9.0 * PI) / (ell_over_lp * ell_over_lp)
}

/// ℓ/ℓ_P = √(8/(9πκ)); infinite for κ = 0.
pub fn cutoff_from_kappa(kappa: f64) -> f64 {
    (8.0 / (9.0 * PI * kappa)).sqrt()
}

fn hubble_length(params: &CosmologyParams) -> Result<f64> {
    if !(params.h0 > 0.0) {
        return Err(Error::domain(format!("H0 must be positive, got {}", params.h0)));
    }
    Ok(PhysicalConstants::codata2018().c / params.h0)
}

/// (2/√Ω_M) ₂F₁(1/6, 1/2; 7/6; −Ω_Λ/Ω_M): the distance in units of c/H₀
/// for a flat matter + Λ universe with a* = 0.
fn closed_form_factor(omega_m: f64, omega_l: f64) -> Result<f64> {
    if !(omega_m > 0.0) {
        return Err(Error::domain(format!(
            "closed-form distance needs Ω_M > 0, got {omega_m}"
        )));
    }
    if !(omega_l >= 0.0) {
        return Err(Error::domain(format!(
            "closed-form distance needs Ω_Λ ≥ 0, got {omega_l}"
        )));
    }
    Ok(2.0 / omega_m.sqrt() * hyp2f1(1.0 / 6.0, 0.5, 7.0 / 6.0, -omega_l / omega_m)?)
}

/// ΛCDM conformal distance to a = 0 from the ₂F₁ closed form.
///
/// Radiation and a* are ignored (set to zero).
pub fn distance_lcdm_closed(params: &CosmologyParams) -> Result<Distance> {
    Ok(Distance {
        metres: hubble_length(params)? * closed_form_factor(params.omega_m, params.omega_l)?,
    })
}

/// The same distance in the buoyancy-modified model: Ω_M → Ω_M/(1+3κ)
/// and Ω_Λ → Ω∞.
pub fn distance_modified(params: &CosmologyParams, omega_inf: f64, kappa: f64) -> Result<Distance> {
    if !(kappa >= 0.0) {
        return Err(Error::domain(format!("κ must be non-negative, got {kappa}")));
    }
    Ok(Distance {
        metres: hubble_length(params)? * closed_form_factor(params.omega_m / (1.0 + 3.0 * kappa), omega_inf)?,
    })
}

/// d = c ∫_{a*}^1 da/(a²H) by quadrature, including radiation and a*.
///
/// Integrated in u with a = a* + u², which removes the a^{−1/2}
/// behaviour of the matter-era integrand.
pub fn distance_quadrature(params: &CosmologyParams, modified: bool) -> Result<Distance> {
    let model = HubbleModel::from_params(params, 1.0, modified)?;
    let integrand = |a: f64| {
        let s: f64 = model.terms.iter().map(|&(c, n)| c * a.powf(4.0 - n)).sum();
        1.0 / s.sqrt()
    };
    let opts = QuadOptions::new(1e-13).endpoint(EndpointHint::InvSqrtLower);
    let r = integrate_with(integrand, params.a_star, 1.0, &opts)?;
    Ok(Distance {
        metres: hubble_length(params)? * r.value,
    })
}

/// Brent tolerance for the distance-matching solve.
pub const MATCH_TOL: f64 = 1e-14;

/// Ω∞ such that the modified model reproduces the ΛCDM distance.
pub fn solve_omega_infinity(params: &CosmologyParams, kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) {
        return Err(Error::domain(format!("κ must be non-negative, got {kappa}")));
    }
    if kappa == 0.0 {
        return Ok(params.omega_l);
    }
    let target = closed_form_factor(params.omega_m, params.omega_l)?;
    let om = params.omega_m / (1.0 + 3.0 * kappa);
    let mismatch = |oi: f64| closed_form_factor(om, oi).map(|d| d / target - 1.0).unwrap_or(f64::NAN);
    let ol = params.omega_l;
    let mut last = None;
    for (lo, hi) in [(0.5 * ol, 2.0 * ol), (0.0, 4.0 * ol)] {
        match brent_root(mismatch, lo, hi, MATCH_TOL) {
            Ok(r) => return Ok(r.root),
            Err(Error::Bracket { lo, hi, f_lo, f_hi }) => last = Some((lo, hi, f_lo, f_hi)),
            Err(e) => return Err(e),
        }
    }
    let (lo, hi, f_lo, f_hi) = last.unwrap_or_default();
    let h = hubble_length(params)? / GLY_M;
    Err(Error::Fit(format!(
        "no Ω∞ in [{lo}, {hi}] matches the ΛCDM distance {:.4} Gly at κ = {kappa}: \
         modified distances {:.4} and {:.4} Gly at the bracket ends",
        h * target,
        h * target * (1.0 + f_lo),
        h * target * (1.0 + f_hi),
    )))
}

/// H|ₐ₌₁/H₀ = √(Ω∞ + Ω_M/(1+3κ)) with Ω∞ from the distance match.
pub fn hubble_ratio(params: &CosmologyParams, kappa: f64) -> Result<f64> {
    let oi = solve_omega_infinity(params, kappa)?;
    Ok((oi + params.omega_m / (1.0 + 3.0 * kappa)).sqrt())
}

/// One point of a κ scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub kappa: f64,
    pub omega_inf: f64,
    pub hubble_ratio: f64,
}

/// Ω∞ and H|ₐ₌₁/H₀ on a list of κ values, evaluated in parallel.
pub fn scan_kappa(params: &CosmologyParams, kappas: &[f64]) -> Result<Vec<ScanPoint>> {
    kappas
        .par_iter()
        .map(|&kappa| {
            let omega_inf = solve_omega_infinity(params, kappa)?;
            Ok(ScanPoint {
                kappa,
                omega_inf,
                hubble_ratio: (omega_inf + params.omega_m / (1.0 + 3.0 * kappa)).sqrt(),
            })
        })
        .collect()
}

/// Result of fitting κ to a measured Hubble ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensionFit {
    pub kappa: f64,
    /// ℓ/ℓ_P; `None` when κ = 0 (no finite cutoff).
    pub ell_over_lp: Option<f64>,
    pub omega_inf: f64,
    pub hubble_ratio: f64,
    /// The matched conformal distance in Gly.
    pub d_match_gly: f64,
}

/// Upper end of the κ search interval.
pub const KAPPA_MAX: f64 = 0.1;

/// The κ whose distance-matched model gives H|ₐ₌₁/H₀ = `target_ratio`.
pub fn fit_kappa(params: &CosmologyParams, target_ratio: f64) -> Result<TensionFit> {
    let d = distance_lcdm_closed(params)?.gly();
    if target_ratio == 1.0 {
        return Ok(TensionFit {
            kappa: 0.0,
            ell_over_lp: None,
            omega_inf: params.omega_l,
            hubble_ratio: hubble_ratio(params, 0.0)?,
            d_match_gly: d,
        });
    }
    if !(target_ratio > 1.0) {
        return Err(Error::Fit(format!("target ratio {target_ratio} is below 1")));
    }
    let r = brent_root(
        |k| hubble_ratio(params, k).map(|r| r - target_ratio).unwrap_or(f64::NAN),
        0.0,
        KAPPA_MAX,
        1e-13,
    )
    .map_err(|e| match e {
        Error::Bracket { f_hi, .. } => Error::Fit(format!(
            "target ratio {target_ratio} is outside the range [1, {:.6}] reachable for κ ∈ [0, {KAPPA_MAX}]",
            f_hi + target_ratio
        )),
        other => other,
    })?;
    let kappa = r.root;
    let omega_inf = solve_omega_infinity(params, kappa)?;
    Ok(TensionFit {
        kappa,
        ell_over_lp: (kappa > 0.0).then(|| cutoff_from_kappa(kappa)),
        omega_inf,
        hubble_ratio: hubble_ratio(params, kappa)?,
        d_match_gly: d,
    })
}

/// φ ≈ λ/d in radians.
pub fn angular_scale(lambda: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain(format!("distance must be positive, got {d}")));
    }
    Ok(lambda / d)
}
