//! Cosmological parameter records, the flat key-value config format, and the
//! Hubble-rate models built from them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::constants::{km_s_mpc_to_per_second, per_second_to_km_s_mpc};
use crate::defaults;
use crate::error::{Error, Result};

/// Tolerance on Ω_R + Ω_M + Ω_Λ = 1 when closure is asserted.
pub const CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosmologyParams {
    /// Hubble constant H₀ in 1/s.
    pub h0: f64,
    pub omega_r: f64,
    pub omega_m: f64,
    /// ΛCDM closure value Ω_Λ.
    pub omega_l: f64,
    /// Late-time fraction Ω∞ of the buoyancy-modified model, if fitted.
    pub omega_inf: Option<f64>,
    /// Vacuum coupling κ.
    pub kappa: f64,
    /// Scale factor at last scattering.
    pub a_star: f64,
}

impl CosmologyParams {
    /// Ω_M = 0.3153, Ω_Λ = 0.6847, H₀ = 67.36 km/s/Mpc, no radiation.
    pub fn planck() -> Self {
        Self {
            h0: km_s_mpc_to_per_second(defaults::H0_KM_S_MPC),
            omega_r: defaults::OMEGA_R,
            omega_m: defaults::OMEGA_M,
            omega_l: defaults::OMEGA_L,
            omega_inf: None,
            kappa: 0.0,
            a_star: defaults::A_STAR,
        }
    }

    pub fn flat(omega_m: f64, omega_l: f64) -> Self {
        Self {
            omega_m,
            omega_l,
            omega_r: 0.0,
            ..Self::planck()
        }
    }

    pub fn with_h0_km_s_mpc(mut self, h0: f64) -> Self {
        self.h0 = km_s_mpc_to_per_second(h0);
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_omega_inf(mut self, omega_inf: f64) -> Self {
        self.omega_inf = Some(omega_inf);
        self
    }

    pub fn h0_km_s_mpc(&self) -> f64 {
        per_second_to_km_s_mpc(self.h0)
    }

    /// Checks signs and ranges; does not require closure.
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64| {
            if !v.is_finite() || v < 0.0 {
                Err(Error::Model(format!("{name} must be finite and non-negative, got {v}")))
            } else {
                Ok(())
            }
        };
        if !(self.h0.is_finite() && self.h0 > 0.0) {
            return Err(Error::Model(format!("H0 must be positive, got {}", self.h0)));
        }
        check("omega_r", self.omega_r)?;
        check("omega_m", self.omega_m)?;
        check("omega_l", self.omega_l)?;
        check("kappa", self.kappa)?;
        if let Some(oi) = self.omega_inf {
            check("omega_inf", oi)?;
        }
        if !(0.0..1.0).contains(&self.a_star) {
            return Err(Error::Model(format!("a_star must lie in [0, 1), got {}", self.a_star)));
        }
        Ok(())
    }

    /// Validates and additionally requires Ω_R + Ω_M + Ω_Λ = 1.
    pub fn validate_closure(&self) -> Result<()> {
        self.validate()?;
        let sum = self.omega_r + self.omega_m + self.omega_l;
        if (sum - 1.0).abs() > CLOSURE_TOL {
            return Err(Error::Model(format!("density fractions sum to {sum}, not 1")));
        }
        Ok(())
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are ignored;
    /// keys missing from the text keep their value from `self`.
    ///
    /// Recognised keys: `h0` (km/s/Mpc), `omega_r`, `omega_m`, `omega_l`,
    /// `omega_inf`, `kappa`, `a_star`. Unknown keys are returned so callers
    /// layering their own settings on the same file can pick them up.
    pub fn merge_config(&self, text: &str) -> Result<(Self, BTreeMap<String, String>)> {
        let mut out = *self;
        let mut rest = BTreeMap::new();
        for (key, value) in parse_key_values(text)? {
            if !out.set(&key, &value)? {
                rest.insert(key, value);
            }
        }
        out.validate()?;
        Ok((out, rest))
    }

    pub fn from_config_file(path: &Path) -> Result<(Self, BTreeMap<String, String>)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::planck().merge_config(&text)
    }

    /// Sets one named parameter from its textual value. Returns `false` for
    /// keys this record does not own.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool> {
        let num = || -> Result<f64> {
            value
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?} as a number")))
        };
        match key {
            "h0" => self.h0 = km_s_mpc_to_per_second(num()?),
            "omega_r" => self.omega_r = num()?,
            "omega_m" => self.omega_m = num()?,
            "omega_l" => self.omega_l = num()?,
            "omega_inf" => self.omega_inf = Some(num()?),
            "kappa" => self.kappa = num()?,
            "a_star" => self.a_star = num()?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

impl Default for CosmologyParams {
    fn default() -> Self {
        Self::planck()
    }
}

/// Parses the flat `key = value` format into ordered pairs.
///
/// Values are kept as text; surrounding double quotes are stripped, so both
/// `history = desitter` and `history = "desitter"` work.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got {raw:?}",
                lineno + 1
            )));
        };
        let value = v.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|s| s.strip_suffix('"'))
            .unwrap_or(value)
            .to_string();
        out.push((k.trim().to_ascii_lowercase(), value));
    }
    Ok(out)
}

/// H² as a sum of power laws, H² = H₀² Σᵢ cᵢ a^{-nᵢ}.
///
/// For a fluid with equation of state w the exponent is n = 3(1+w), so
/// radiation contributes n = 4, matter n = 3 and a cosmological constant
/// n = 0. The buoyancy-modified model divides each coefficient by
/// 1 + n κ and replaces Ω_Λ with Ω∞.
#[derive(Debug, Clone, PartialEq)]
pub struct HubbleModel {
    /// H₀ in the caller's time unit.
    pub h0: f64,
    /// (coefficient, exponent) pairs.
    pub terms: Vec<(f64, f64)>,
}

impl HubbleModel {
    pub fn lcdm(params: &CosmologyParams, h0: f64) -> Self {
        Self {
            h0,
            terms: vec![(params.omega_r, 4.0), (params.omega_m, 3.0), (params.omega_l, 0.0)],
        }
    }

    /// The buoyancy-modified model; requires `omega_inf`.
    pub fn modified(params: &CosmologyParams, h0: f64) -> Result<Self> {
        let omega_inf = params
            .omega_inf
            .ok_or_else(|| Error::Model("modified Hubble model needs omega_inf".into()))?;
        let k = params.kappa;
        Ok(Self {
            h0,
            terms: vec![
                (params.omega_r / (1.0 + 4.0 * k), 4.0),
                (params.omega_m / (1.0 + 3.0 * k), 3.0),
                (omega_inf, 0.0),
            ],
        })
    }

    pub fn from_params(params: &CosmologyParams, h0: f64, modified: bool) -> Result<Self> {
        if modified {
            Self::modified(params, h0)
        } else {
            Ok(Self::lcdm(params, h0))
        }
    }

    /// E²(a) = H²/H₀².
    pub fn e2(&self, a: f64) -> f64 {
        self.terms.iter().map(|&(c, n)| c * a.powf(-n)).sum()
    }

    pub fn hubble_squared(&self, a: f64) -> Result<f64> {
        if !(a > 0.0) {
            return Err(Error::domain(format!("scale factor must be positive, got {a}")));
        }
        let h2 = self.h0 * self.h0 * self.e2(a);
        if h2 < 0.0 || !h2.is_finite() {
            return Err(Error::Model(format!("H² = {h2} at a = {a}")));
        }
        Ok(h2)
    }

    pub fn hubble(&self, a: f64) -> Result<f64> {
        self.hubble_squared(a).map(f64::sqrt)
    }

    /// Ḣ = ½ a ∂ₐH².
    pub fn hubble_dot(&self, a: f64) -> f64 {
        -0.5 * self.h0 * self.h0 * self.terms.iter().map(|&(c, n)| n * c * a.powf(-n)).sum::<f64>()
    }

    /// Ḧ = a H ∂ₐḢ.
    pub fn hubble_ddot(&self, a: f64) -> Result<f64> {
        let h = self.hubble(a)?;
        let s: f64 = self.terms.iter().map(|&(c, n)| n * n * c * a.powf(-n)).sum();
        Ok(0.5 * h * self.h0 * self.h0 * s)
    }

    /// ä/a from the pressure sum, -(4πG/3c²)(ε + 3p), with each term treated
    /// as a fluid of w = n/3 - 1.
    pub fn acceleration_from_pressure(&self, a: f64) -> f64 {
        -0.5 * self.h0
            * self.h0
            * self
                .terms
                .iter()
                .map(|&(c, n)| {
                    let w = n / 3.0 - 1.0;
                    c * a.powf(-n) * (1.0 + 3.0 * w)
                })
                .sum::<f64>()
    }
}
