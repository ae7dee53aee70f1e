//! Energy densities of the bare vacuum, the renormalizer and their
//! difference, and the anomaly that restores energy conservation.

use std::f64::consts::PI;

use serde::Serialize;

use super::transformed::delta_from_state;
use crate::constants::Units;
use crate::error::{Error, Result};
use crate::history::{ExpansionHistory, HistoryState};
use crate::numerics::diff::fd_derivative;

fn check_ell(ell: f64) -> Result<()> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::domain(format!("cutoff length must be positive, got {ell}")));
    }
    Ok(())
}

/// ε_E = ε_M = −ħc/(2π²ℓ⁴), taking θ → 0 before r → 0.
pub fn bare_energy_density(ell: f64, units: Units) -> Result<(f64, f64)> {
    check_ell(ell)?;
    let e = -units.hbar * units.c / (2.0 * PI * PI * ell.powi(4));
    Ok((e, e))
}

/// The opposite order of limits, r → 0 first, to order θ⁻²:
/// ε_E = 3ħ/(2π²c³θ⁴) − ħ(2H² + Ḣ)/(8π²c³θ²),
/// ε_M = 3ħ/(2π²c³θ⁴) − ħ(H² − Ḣ)/(4π²c³θ²).
pub fn timelike_limit_energy(history: &ExpansionHistory, t: f64, theta: f64, units: Units) -> Result<(f64, f64)> {
    if theta == 0.0 || !theta.is_finite() {
        return Err(Error::domain(format!("θ must be finite and non-zero, got {theta}")));
    }
    let s = history.state(t)?;
    let (hb, c3) = (units.hbar, units.c.powi(3));
    let lead = 3.0 * hb / (2.0 * PI * PI * c3 * theta.powi(4));
    let t2 = theta * theta;
    let e = lead - hb * (2.0 * s.h * s.h + s.h_dot) / (8.0 * PI * PI * c3 * t2);
    let m = lead - hb * (s.h * s.h - s.h_dot) / (4.0 * PI * PI * c3 * t2);
    Ok((e, m))
}

/// ε₀ = −ħc/(2π²ℓ⁴) + (ħc/(2π²ℓ²))·δ/(6c²) for each of the E and M parts.
pub fn renormalizer_energy_density(history: &ExpansionHistory, t: f64, ell: f64, units: Units) -> Result<(f64, f64)> {
    check_ell(ell)?;
    let delta = delta_from_state(&history.state(t)?)?;
    let (e, _) = bare_energy_density(ell, units)?;
    let e = e + renormalizer_ell2_term(delta, ell, units);
    Ok((e, e))
}

fn renormalizer_ell2_term(delta: f64, ell: f64, units: Units) -> f64 {
    units.hbar * units.c / (2.0 * PI * PI * ell * ell) * delta / (6.0 * units.c * units.c)
}

fn vacuum_from_state(s: &HistoryState, ell: f64, units: Units) -> Result<f64> {
    let delta = delta_from_state(s)?;
    Ok(-units.hbar / (6.0 * PI * PI * units.c * ell * ell) * delta)
}

/// ε_vac = ε − ε₀ = −(ħ/(6π²cℓ²))·Ḧ/H.
pub fn vacuum_energy_density(history: &ExpansionHistory, t: f64, ell: f64, units: Units) -> Result<f64> {
    check_ell(ell)?;
    vacuum_from_state(&history.state(t)?, ell, units)
}

/// Energy budget at one instant. Densities are E + M totals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    pub t: f64,
    pub ell: f64,
    pub eps_bare: f64,
    pub eps_renormalizer: f64,
    pub eps_vac: f64,
    /// ε_Λ, the anomalous part that keeps ε_vac + ε_Λ conserved.
    pub eps_anomaly: f64,
    pub eps_inf: f64,
    pub p_vac: f64,
    pub p_lambda: f64,
}

/// ε_vac + ε_Λ = ε_∞ + (2ħ/(3π²cℓ²))Ḣ, with p_vac = ε_vac/3 and p_Λ = −ε_Λ.
pub fn anomaly_density(
    history: &ExpansionHistory,
    t: f64,
    ell: f64,
    eps_inf: f64,
    units: Units,
) -> Result<EnergyReport> {
    check_ell(ell)?;
    let s = history.state(t)?;
    let eps_vac = vacuum_from_state(&s, ell, units)?;
    let total = conserved_total(&s, ell, eps_inf, units);
    let (b, _) = bare_energy_density(ell, units)?;
    let (r, _) = renormalizer_energy_density(history, t, ell, units)?;
    let eps_anomaly = total - eps_vac;
    Ok(EnergyReport {
        t,
        ell,
        eps_bare: 2.0 * b,
        eps_renormalizer: 2.0 * r,
        eps_vac,
        eps_anomaly,
        eps_inf,
        p_vac: eps_vac / 3.0,
        p_lambda: -eps_anomaly,
    })
}

fn conserved_total(s: &HistoryState, ell: f64, eps_inf: f64, units: Units) -> f64 {
    eps_inf + 2.0 * units.hbar / (3.0 * PI * PI * units.c * ell * ell) * s.h_dot
}

/// Finite-difference step for time derivatives of history quantities:
/// a hundredth of the Hubble time, kept well inside the domain.
pub(crate) fn time_step(history: &ExpansionHistory, t: f64, h: f64) -> f64 {
    let (lo, hi) = history.domain();
    let mut step = if h != 0.0 { 1e-2 / h.abs() } else { 1e-2 };
    if lo.is_finite() {
        step = step.min(0.2 * (t - lo));
    }
    if hi.is_finite() {
        step = step.min(0.2 * (hi - t));
    }
    step
}

/// |∂t(ε_vac + ε_Λ) + 4ε_vac H| with the time derivative taken by finite
/// differences of [`anomaly_density`]. Zero when the anomaly balances the
/// vacuum term exactly.
pub fn anomaly_conservation_residual(history: &ExpansionHistory, t: f64, ell: f64, units: Units) -> Result<f64> {
    check_ell(ell)?;
    let s = history.state(t)?;
    let eps_vac = vacuum_from_state(&s, ell, units)?;
    let step = time_step(history, t, s.h);
    // Errors inside the stencil surface as NaN and are reported below.
    let total = |tt: f64| {
        history
            .state(tt)
            .map(|st| conserved_total(&st, ell, 0.0, units))
            .unwrap_or(f64::NAN)
    };
    let d = fd_derivative(total, t, 1, step);
    if !d.is_finite() {
        return Err(Error::domain(format!(
            "time derivative at t = {t} left the history domain"
        )));
    }
    Ok((d + 4.0 * eps_vac * s.h).abs())
}

/// The vacuum and anomaly terms in units of the critical density
/// 3H₀²c²/(8πG), with the cutoff given through κ = (8/(9π))(ℓ_P/ℓ)².
/// Rates are in the same time unit as `h0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalEnergyRow {
    pub t: f64,
    pub eps_vac: f64,
    pub eps_lambda: f64,
    pub p_vac: f64,
    pub p_lambda: f64,
    /// |∂t(ε_vac + ε_Λ) + 4ε_vac H| in critical units per unit time.
    pub conservation_residual: f64,
}

/// ε_vac/ε_crit = −(κ/2)(Ḧ/H)/H₀² and (ε_vac + ε_Λ − ε_∞)/ε_crit = 2κḢ/H₀².
pub fn critical_energy_row(
    history: &ExpansionHistory,
    t: f64,
    kappa: f64,
    eps_inf: f64,
    h0: f64,
) -> Result<CriticalEnergyRow> {
    if !(h0 > 0.0) {
        return Err(Error::domain(format!("H0 must be positive, got {h0}")));
    }
    let s = history.state(t)?;
    let delta = delta_from_state(&s)?;
    let h02 = h0 * h0;
    let eps_vac = -0.5 * kappa * delta / h02;
    let total = |st: &HistoryState| eps_inf + 2.0 * kappa * st.h_dot / h02;
    let eps_lambda = total(&s) - eps_vac;
    let step = time_step(history, t, s.h);
    let d = fd_derivative(
        |tt| history.state(tt).map(|st| total(&st)).unwrap_or(f64::NAN),
        t,
        1,
        step,
    );
    Ok(CriticalEnergyRow {
        t,
        eps_vac,
        eps_lambda,
        p_vac: eps_vac / 3.0,
        p_lambda: -eps_lambda,
        conservation_residual: (d + 4.0 * eps_vac * s.h).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::distance::cutoff_from_kappa;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn bare_scales_quartically() {
        let u = Units::natural();
        let (e1, m1) = bare_energy_density(1.3, u).unwrap();
        let (e2, _) = bare_energy_density(2.6, u).unwrap();
        assert_eq!(e1, m1);
        assert!(rel(e1 / e2, 16.0) < 1e-14);
        assert!(bare_energy_density(0.0, u).is_err());
    }

    #[test]
    fn bare_at_planck_length() {
        let k = PhysicalConstants::codata2018();
        let (e, _) = bare_energy_density(k.l_p, Units::si()).unwrap();
        let expect = -k.hbar * k.c / (2.0 * PI * PI * k.l_p.powi(4));
        assert!(rel(e, expect) < 1e-14);
        assert!(e < -1e112);
    }

    #[test]
    fn timelike_difference_vanishes_for_de_sitter() {
        let ds = ExpansionHistory::de_sitter(1.0, 1.0).unwrap();
        let th = 0.01;
        let (e, m) = timelike_limit_energy(&ds, 0.0, th, Units::natural()).unwrap();
        assert!((e - m).abs() < 1e-12 * e.abs());
        let lead = 3.0 / (2.0 * PI * PI * th.powi(4));
        assert!(rel(e, lead - 2.0 / (8.0 * PI * PI * th * th)) < 1e-15);
        let pl = ExpansionHistory::power_law(0.5).unwrap();
        let (e, m) = timelike_limit_energy(&pl, 1.0, th, Units::natural()).unwrap();
        let hd = -0.5;
        assert!(rel(e - m, -3.0 * hd / (8.0 * PI * PI * th * th)) < 1e-6);
        assert!(timelike_limit_energy(&pl, 1.0, 0.0, Units::natural()).is_err());
    }

    #[test]
    fn renormalizer_matches_bare_for_de_sitter() {
        let ds = ExpansionHistory::de_sitter(2.0, 1.0).unwrap();
        let u = Units::natural();
        assert_eq!(
            renormalizer_energy_density(&ds, 0.4, 0.7, u).unwrap(),
            bare_energy_density(0.7, u).unwrap()
        );
        assert_eq!(vacuum_energy_density(&ds, 0.4, 0.7, u).unwrap(), 0.0);
    }

    #[test]
    fn matter_era_values() {
        let pl = ExpansionHistory::power_law(2.0 / 3.0).unwrap();
        let u = Units::natural();
        let (e0, _) = renormalizer_energy_density(&pl, 1.0, 1.0, u).unwrap();
        let (b, _) = bare_energy_density(1.0, u).unwrap();
        assert!(rel(e0 - b, 1.0 / (2.0 * PI * PI) * 2.0 / 6.0) < 1e-14);
        for t in [0.5, 2.0] {
            let v = vacuum_energy_density(&pl, t, 0.3, u).unwrap();
            assert!(rel(v, -1.0 / (3.0 * PI * PI * 0.09 * t * t)) < 1e-14);
            // ε_vac is minus twice the ℓ⁻² term of one renormalizer part.
            let (r, _) = renormalizer_energy_density(&pl, t, 0.3, u).unwrap();
            let (b, _) = bare_energy_density(0.3, u).unwrap();
            assert!(rel(v, -2.0 * (r - b)) < 1e-10);
        }
    }

    #[test]
    fn anomaly_report() {
        let u = Units::natural();
        let ds = ExpansionHistory::de_sitter(1.0, 1.0).unwrap();
        let rep = anomaly_density(&ds, 0.0, 0.5, 3.0, u).unwrap();
        assert_eq!(rep.eps_vac, 0.0);
        assert_eq!(rep.eps_vac + rep.eps_anomaly, 3.0);
        assert_eq!(rep.p_lambda, -rep.eps_anomaly);

        let pl = ExpansionHistory::power_law(2.0 / 3.0).unwrap();
        let (t, ell) = (1.5, 0.2);
        let rep = anomaly_density(&pl, t, ell, 0.0, u).unwrap();
        let expect = 2.0 / (3.0 * PI * PI * ell * ell) * (-2.0 / (3.0 * t * t));
        assert!(rel(rep.eps_vac + rep.eps_anomaly - rep.eps_inf, expect) < 1e-14);
        assert!(rel(rep.p_vac, rep.eps_vac / 3.0) < 1e-15);
        assert!(rel(rep.eps_bare, -1.0 / (PI * PI * ell.powi(4))) < 1e-14);
    }

    #[test]
    fn anomaly_is_conserved_along_power_laws() {
        let u = Units::natural();
        for p in [0.5, 2.0 / 3.0, 1.0] {
            let h = ExpansionHistory::power_law(p).unwrap();
            for t in [0.3, 1.0, 4.0] {
                let s = h.state(t).unwrap();
                let scale = (4.0 * vacuum_energy_density(&h, t, 0.1, u).unwrap() * s.h).abs();
                let res = anomaly_conservation_residual(&h, t, 0.1, u).unwrap();
                assert!(res < 1e-8 * scale, "p={p} t={t}: {res} vs {scale}");
            }
        }
    }

    #[test]
    fn critical_units_match_si_route() {
        let k = PhysicalConstants::codata2018();
        let kappa = 0.0128;
        let h0_si = 2.2e-18;
        let ell = cutoff_from_kappa(kappa) * k.l_p;
        let pl = ExpansionHistory::power_law(2.0 / 3.0).unwrap();
        let t = 0.8;
        let row = critical_energy_row(&pl, t, kappa, 0.7, 1.0).unwrap();
        // Same history with time measured in seconds: rates pick up H₀ factors.
        let s = pl.state(t).unwrap();
        let delta_si = s.h_ddot / s.h * h0_si * h0_si;
        let eps_vac_si = -k.hbar / (6.0 * PI * PI * k.c * ell * ell) * delta_si;
        let crit = k.critical_energy_density(h0_si);
        assert!(rel(row.eps_vac, eps_vac_si / crit) < 1e-6);
        let hdot_si = s.h_dot * h0_si * h0_si;
        let sum_si = 2.0 * k.hbar / (3.0 * PI * PI * k.c * ell * ell) * hdot_si;
        assert!(rel(row.eps_vac + row.eps_lambda - 0.7, sum_si / crit) < 1e-6);
        assert!(row.conservation_residual < 1e-8 * (4.0 * row.eps_vac * s.h).abs());
    }
}
