//! Physical constants and unit conversions.
//!
//! Values are CODATA 2018. The Planck length and mass and the vacuum
//! permittivity are derived from the defining constants rather than stored,
//! so the identities between them hold to machine precision.

use serde::Serialize;

/// Metres per light year (Julian year of 365.25 days).
pub const LIGHT_YEAR_M: f64 = 9.460_730_472_580_8e15;
/// Metres per gigalight year.
pub const GLY_M: f64 = 1e9 * LIGHT_YEAR_M;
/// Metres per megaparsec.
pub const MPC_M: f64 = 3.085_677_581_491_367e22;

/// Converts a Hubble rate in km/s/Mpc to 1/s.
pub fn km_s_mpc_to_per_second(h0: f64) -> f64 {
    h0 * 1e3 / MPC_M
}

/// Converts a Hubble rate in 1/s to km/s/Mpc.
pub fn per_second_to_km_s_mpc(h0: f64) -> f64 {
    h0 * MPC_M / 1e3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Speed of light (m/s).
    pub c: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Newton's constant (m³/kg/s²).
    pub g: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Planck length (m).
    pub l_p: f64,
    /// Planck mass (kg).
    pub m_p: f64,
    /// Vacuum permittivity (F/m).
    pub eps0: f64,
    /// Vacuum permeability (H/m).
    pub mu0: f64,
}

impl PhysicalConstants {
    pub fn codata2018() -> Self {
        let c = 299_792_458.0;
        let hbar = 1.054_571_817e-34;
        let g = 6.674_30e-11;
        let k_b = 1.380_649e-23;
        let mu0 = 1.256_637_062_12e-6;
        Self {
            c,
            hbar,
            g,
            k_b,
            l_p: (hbar * g / (c * c * c)).sqrt(),
            m_p: (hbar * c / g).sqrt(),
            eps0: 1.0 / (mu0 * c * c),
            mu0,
        }
    }

    /// Critical energy density 3H²c²/(8πG) for a Hubble rate in 1/s (J/m³).
    pub fn critical_energy_density(&self, h: f64) -> f64 {
        3.0 * h * h * self.c * self.c / (8.0 * std::f64::consts::PI * self.g)
    }

    /// The Hubble length c/H in metres for a rate in 1/s.
    pub fn hubble_length(&self, h: f64) -> f64 {
        self.c / h
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

/// The pair (ħ, c) an energy-density formula is evaluated in.
///
/// `natural()` sets both to one: lengths and times then share a unit and
/// energy densities come out in units of ħ/length⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub c: f64,
}

impl Units {
    pub fn natural() -> Self {
        Self { hbar: 1.0, c: 1.0 }
    }

    pub fn si() -> Self {
        let k = PhysicalConstants::codata2018();
        Self { hbar: k.hbar, c: k.c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn derived_constants_are_consistent() {
        let k = PhysicalConstants::codata2018();
        assert!(rel(k.l_p, (k.hbar * k.g / k.c.powi(3)).sqrt()) < 1e-15);
        assert!(rel(k.eps0 * k.mu0, 1.0 / (k.c * k.c)) < 1e-15);
        assert!(rel(k.m_p, (k.hbar * k.c / k.g).sqrt()) < 1e-15);
    }

    #[test]
    fn planck_length_value() {
        let k = PhysicalConstants::codata2018();
        assert!((k.l_p - 1.616255e-35).abs() < 1e-41);
    }

    #[test]
    fn gly_matches_unit_table() {
        assert!(rel(GLY_M, 9.4607e24) < 1e-5);
        let h = km_s_mpc_to_per_second(70.0);
        assert!(rel(h, 2.2685e-18) < 1e-4);
        assert!(rel(per_second_to_km_s_mpc(h), 70.0) < 1e-14);
    }
}
