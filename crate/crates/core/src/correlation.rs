//! Closed-form vacuum correlations of the conformal vacuum.
//!
//! Everything here works in natural units unless a speed of light is passed
//! explicitly: c = 1 and times in 1/H, so lengths are in c/H. In SI the
//! correlation magnitudes underflow double precision.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::numerics::{principal_value_with, QuadOptions};

/// Relative distance to the light cone below which K is treated as singular.
pub const LIGHT_CONE_TOL: f64 = 1e-12;

/// A pair of events separated by conformal time τ and comoving radius r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacetimeInterval {
    pub tau: f64,
    pub r: f64,
    pub c: f64,
    /// s² = c²τ² − r².
    pub s2: f64,
}

impl SpacetimeInterval {
    /// Natural units, c = 1.
    pub fn new(tau: f64, r: f64) -> Self {
        Self::with_c(tau, r, 1.0)
    }

    pub fn with_c(tau: f64, r: f64, c: f64) -> Self {
        Self {
            tau,
            r,
            c,
            s2: c * c * tau * tau - r * r,
        }
    }

    /// c²τ² + r², the scale the light-cone test is relative to.
    pub fn scale(&self) -> f64 {
        self.c * self.c * self.tau * self.tau + self.r * self.r
    }

    pub fn near_light_cone(&self) -> bool {
        self.s2.abs() < LIGHT_CONE_TOL * self.scale()
    }
}

/// K = −1/(4π²s²): anti-correlated inside the light cone, correlated
/// outside.
pub fn vacuum_correlation(iv: &SpacetimeInterval) -> Result<f64> {
    if iv.near_light_cone() {
        return Err(Error::singular(format!(
            "interval (τ = {}, r = {}) lies on the light cone",
            iv.tau, iv.r
        )));
    }
    Ok(-1.0 / (4.0 * PI * PI * iv.s2))
}

fn gaussian(x: f64, width: f64) -> f64 {
    (-0.5 * (x / width).powi(2)).exp() / (width * (2.0 * PI).sqrt())
}

/// Γ(τ₀) = (G₊ − G₋)/(2c) with G± = −δ(τ₀ ∓ r/c)/(4πr), each δ replaced
/// by a normalized Gaussian of standard deviation `width`.
pub fn smoothed_dissipation(tau0: f64, r: f64, c: f64, width: f64) -> f64 {
    let rho = r / c;
    let g_plus = -gaussian(tau0 - rho, width) / (4.0 * PI * r);
    let g_minus = -gaussian(tau0 + rho, width) / (4.0 * PI * r);
    (g_plus - g_minus) / (2.0 * c)
}

/// K from the Hilbert transform −(1/π) P∫ Γ(τ₀)/(τ₀ − τ) dτ₀ of the
/// smoothed dissipation.
pub fn hilbert_correlation(width: f64, iv: &SpacetimeInterval) -> Result<f64> {
    if !(width > 0.0) {
        return Err(Error::domain(format!("smoothing width must be positive, got {width}")));
    }
    if !(iv.r > 0.0) {
        return Err(Error::domain("the Green functions need r > 0"));
    }
    let rho = iv.r / iv.c;
    let reach = 40.0 * width;
    let lo = (-rho - reach).min(iv.tau - reach);
    let hi = (rho + reach).max(iv.tau + reach);
    let mut breaks = Vec::new();
    for centre in [-rho, rho] {
        for k in [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0] {
            breaks.push(centre + k * width);
        }
    }
    let opts = QuadOptions::new(1e-12).breakpoints(breaks).abs_tol(1e-300);
    let gamma = |t0: f64| smoothed_dissipation(t0, iv.r, iv.c, width);
    let pv = principal_value_with(|t0| gamma(t0) / (t0 - iv.tau), iv.tau, lo, hi, &opts)?;
    Ok(-pv.value / PI)
}

/// |K_Hilbert − K| for the Gaussian-smoothed dissipation; vanishes as the
/// width goes to zero.
pub fn hilbert_fdt_check(width: f64, iv: &SpacetimeInterval) -> Result<f64> {
    let exact = vacuum_correlation(iv)?;
    Ok((hilbert_correlation(width, iv)? - exact).abs())
}

/// τ = (2/(aH)) sinh(Hθ/2) in de Sitter space.
pub fn desitter_conformal_tau(h: f64, a: f64, theta: f64) -> f64 {
    2.0 / (a * h) * (0.5 * h * theta).sinh()
}

/// The same closed form at complex θ.
pub fn desitter_conformal_tau_complex(h: f64, a: f64, theta: Complex64) -> Complex64 {
    (theta * (0.5 * h)).sinh() * (2.0 / (a * h))
}

/// The de Sitter vacuum correlation at midpoint scale factor a = 1.
pub fn desitter_correlation(h: f64, theta: f64, r: f64) -> Result<f64> {
    vacuum_correlation(&SpacetimeInterval::new(desitter_conformal_tau(h, 1.0, theta), r))
}

/// Thermal correlation in Minkowski space at inverse temperature 2π/H,
/// with ρ = r/c:
///
/// K_th = (1/(8π²c²ρ)) ∂ρ ln[(e^{Hθ} − e^{Hρ})(e^{Hθ} − e^{−Hρ})]
///      = −H sinh(Hρ) / (8π²c²ρ (cosh Hθ − cosh Hρ)).
///
/// The difference of cosines is evaluated as
/// 2 sinh(H(θ+ρ)/2) sinh(H(θ−ρ)/2), which has no cancellation.
pub fn thermal_correlation(h: f64, theta: f64, rho: f64) -> Result<f64> {
    if rho == 0.0 {
        return Err(Error::domain(
            "thermal correlation needs ρ ≠ 0; use the de Sitter form at r = 0",
        ));
    }
    let den = 2.0 * (0.5 * h * (theta + rho)).sinh() * (0.5 * h * (theta - rho)).sinh();
    let scale = (0.5 * h * theta).sinh().powi(2) + (0.5 * h * rho).sinh().powi(2);
    if den.abs() <= LIGHT_CONE_TOL * 2.0 * scale {
        return Err(Error::singular(format!(
            "θ = ±ρ = {rho} is a pole of the thermal correlation"
        )));
    }
    Ok(-h * (h * rho).sinh() / (8.0 * PI * PI * rho * den))
}

/// |f(θ − 2πi/H) − f*(θ)| for the de Sitter Wightman function f = K + iΓ
/// at a = 1.
///
/// Off the light cone Γ vanishes and K is evaluated at the complex
/// conformal time τ(θ − 2πi/H) = −τ(θ).
pub fn kms_check(h: f64, theta: f64, r: f64) -> Result<f64> {
    let tau = desitter_conformal_tau(h, 1.0, theta);
    let iv = SpacetimeInterval::new(tau, r);
    let k = vacuum_correlation(&iv)?;
    let f = Complex64::new(k, 0.0);
    let theta_star = Complex64::new(theta, -2.0 * PI / h);
    let tau_star = desitter_conformal_tau_complex(h, 1.0, theta_star);
    let f_star = -1.0 / (4.0 * PI * PI * (tau_star * tau_star - r * r));
    Ok((f_star - f.conj()).norm())
}

/// k_B T = ħH/(2π), returned in kelvin for H in 1/s.
pub fn gibbons_hawking_temperature(h: f64) -> f64 {
    let k = PhysicalConstants::codata2018();
    k.hbar * h / (2.0 * PI * k.k_b)
}

/// What a correlation grid evaluates in each (τ or θ, r) cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridMode {
    /// K(τ, r) in flat conformal coordinates.
    Vacuum,
    /// de Sitter K against the thermal K at ρ = r (H = 1).
    DesitterThermal,
    /// KMS residual at (θ, r) (H = 1).
    KmsCheck,
    /// Hilbert-transform error at (τ, r) for a given smoothing width.
    FdtCheck { width: f64 },
}

/// One row of a correlation grid. Cells on the light cone carry `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub time: f64,
    pub r: f64,
    pub value: Option<f64>,
    /// Second column: K_th for `DesitterThermal`, K itself for `FdtCheck`.
    pub reference: Option<f64>,
    /// Relative difference |value − reference|/|reference| where meaningful.
    pub rel_diff: Option<f64>,
}

/// Evaluates `mode` on the product grid `times` × `radii`.
pub fn correlation_grid(mode: GridMode, times: &[f64], radii: &[f64]) -> Result<Vec<GridRow>> {
    let cells: Vec<(f64, f64)> = times.iter().flat_map(|&t| radii.iter().map(move |&r| (t, r))).collect();
    cells.par_iter().map(|&(t, r)| grid_cell(mode, t, r)).collect()
}

fn singular_to_none(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Singularity(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn grid_cell(mode: GridMode, time: f64, r: f64) -> Result<GridRow> {
    let mut row = GridRow {
        time,
        r,
        value: None,
        reference: None,
        rel_diff: None,
    };
    match mode {
        GridMode::Vacuum => {
            row.value = singular_to_none(vacuum_correlation(&SpacetimeInterval::new(time, r)))?;
        }
        GridMode::DesitterThermal => {
            row.value = singular_to_none(desitter_correlation(1.0, time, r))?;
            row.reference = singular_to_none(thermal_correlation(1.0, time, r))?;
        }
        GridMode::KmsCheck => {
            row.value = singular_to_none(kms_check(1.0, time, r))?;
        }
        GridMode::FdtCheck { width } => {
            let iv = SpacetimeInterval::new(time, r);
            row.reference = singular_to_none(vacuum_correlation(&iv))?;
            if row.reference.is_some() {
                row.value = Some(hilbert_correlation(width, &iv)?);
            }
        }
    }
    if let (Some(v), Some(w)) = (row.value, row.reference) {
        row.rel_diff = Some((v - w).abs() / w.abs());
    }
    Ok(row)
}

/// Writes rows as CSV with header `time,r,value,reference,rel_diff`.
/// Missing values are written as empty fields.
pub fn write_grid_csv<W: Write>(rows: &[GridRow], mut out: W) -> std::io::Result<()> {
    let cell = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    writeln!(out, "time,r,value,reference,rel_diff")?;
    for row in rows {
        writeln!(
            out,
            "{:e},{:e},{},{},{}",
            row.time,
            row.r,
            cell(row.value),
            cell(row.reference),
            cell(row.rel_diff)
        )?;
    }
    Ok(())
}

pub fn export_grid_csv(rows: &[GridRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    write_grid_csv(rows, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}
