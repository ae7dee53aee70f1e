//! The transformed time w(θ) and the renormalizer correlation K₀ built on it.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::history::{ExpansionHistory, HistoryState};
use crate::numerics::jet::Real;

/// Largest relative correction |w′ − 1| at which the w(θ) series is used.
pub const W_SERIES_GUARD: f64 = 0.5;

/// Relative distance of w from ±w(θ₀) treated as a pole hit.
pub const POLE_TOL: f64 = 1e-12;

pub(crate) fn delta_from_state(s: &HistoryState) -> Result<f64> {
    if s.h == 0.0 {
        return Err(Error::singular("δ = Ḧ/H needs H ≠ 0"));
    }
    Ok(s.h_ddot / s.h)
}

/// δ = Ḧ/H.
pub fn delta_coefficient(history: &ExpansionHistory, t: f64) -> Result<f64> {
    delta_from_state(&history.state(t)?)
}

/// w = θ − (δ/6)θ³ln|θ| without the range check. Generic so that jets
/// can carry exact θ-derivatives through it.
pub fn w_series<T: Real>(delta: f64, theta: T) -> T {
    theta - theta.cube_log_abs() * (delta / 6.0)
}

/// w′ = 1 − (δ/6)(3θ²ln|θ| + θ²), continued by 1 at θ = 0.
pub fn w_prime_series<T: Real>(delta: f64, theta: T) -> T {
    if theta.value() == 0.0 {
        return T::cst(1.0);
    }
    let t2 = theta * theta;
    T::cst(1.0) - t2 * (theta.ln_abs() * 3.0 + 1.0) * (delta / 6.0)
}

fn check_series(delta: f64, theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::domain(format!("θ must be finite, got {theta}")));
    }
    if theta == 0.0 {
        return Ok(());
    }
    let t2 = theta * theta;
    let size = delta.abs() * t2 * (3.0 * theta.abs().ln().abs() + 1.0) / 6.0;
    if size > W_SERIES_GUARD {
        return Err(Error::domain(format!(
            "w(θ) series correction {size:.3} at θ = {theta} exceeds {W_SERIES_GUARD}"
        )));
    }
    Ok(())
}

pub fn w_of_theta(delta: f64, theta: f64) -> Result<f64> {
    check_series(delta, theta)?;
    Ok(w_series(delta, theta))
}

pub fn w_prime(delta: f64, theta: f64) -> Result<f64> {
    check_series(delta, theta)?;
    Ok(w_prime_series(delta, theta))
}

/// θ = w + (δ/6)w³ln|w|, the series w(θ) inverts.
pub fn theta_of_w(delta: f64, w: f64) -> Result<f64> {
    check_series(delta, w)?;
    Ok(w + delta / 6.0 * w.cube_log_abs())
}

/// K₀ = −(a|w′(θ₀)|/(8π²cr))·(1/(w − W) − 1/(w + W)) with W = w(θ₀) and
/// θ₀ = ar/c, for scale factor `a` and δ = Ḧ/H held fixed.
pub fn k0<T: Real>(a: f64, c: f64, delta: f64, theta: T, r: T) -> T {
    let theta0 = r * (a / c);
    let big_w = w_series(delta, theta0);
    let wp = w_prime_series(delta, theta0).abs();
    let w = w_series(delta, theta);
    let one = T::cst(1.0);
    -(wp * (a / (8.0 * PI * PI * c)) / r) * (one / (w - big_w) - one / (w + big_w))
}

/// K₀ at midpoint time `t`, time offset θ and comoving distance r, with c = 1.
pub fn renormalizer_correlation(history: &ExpansionHistory, t: f64, theta: f64, r: f64) -> Result<f64> {
    renormalizer_correlation_with_c(history, t, theta, r, 1.0)
}

pub fn renormalizer_correlation_with_c(history: &ExpansionHistory, t: f64, theta: f64, r: f64, c: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("r must be positive, got {r}")));
    }
    let s = history.state(t)?;
    let delta = delta_from_state(&s)?;
    let theta0 = s.a * r / c;
    check_series(delta, theta0)?;
    check_series(delta, theta)?;
    let big_w = w_series(delta, theta0);
    let w = w_series(delta, theta);
    if (w.abs() - big_w).abs() <= POLE_TOL * big_w {
        return Err(Error::singular(format!("w(θ) = {w} coincides with a pole ±{big_w}")));
    }
    Ok(k0(s.a, c, delta, theta, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{vacuum_correlation, SpacetimeInterval};

    #[test]
    fn delta_values() {
        let ds = ExpansionHistory::de_sitter(1.0, 1.0).unwrap();
        assert_eq!(delta_coefficient(&ds, 0.0).unwrap(), 0.0);
        for p in [0.5, 2.0 / 3.0] {
            let h = ExpansionHistory::power_law(p).unwrap();
            for t in [0.5, 1.0, 3.0] {
                assert!((delta_coefficient(&h, t).unwrap() - 2.0 / (t * t)).abs() < 1e-14);
            }
        }
        let st = ExpansionHistory::static_medium(1.0).unwrap();
        assert!(matches!(delta_coefficient(&st, 0.0), Err(Error::Singularity(_))));
    }

    #[test]
    fn w_identity_and_oddness() {
        for th in [-0.3, -1e-3, 0.0, 2e-2, 0.4] {
            assert_eq!(w_of_theta(0.0, th).unwrap(), th);
            assert_eq!(w_of_theta(1.3, -th).unwrap(), -w_of_theta(1.3, th).unwrap());
        }
        assert_eq!(w_of_theta(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn w_prime_is_the_derivative() {
        use crate::numerics::diff::fd_derivative;
        let d = 0.9;
        for th in [0.05, 0.2, -0.15] {
            let num = fd_derivative(|x| w_series(d, x), th, 1, 1e-3);
            assert!((num - w_prime(d, th).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn round_trip_is_fifth_order() {
        let th: f64 = 1e-3;
        let back = theta_of_w(1.0, w_of_theta(1.0, th).unwrap()).unwrap();
        let bound = 10.0 * th.powi(5) * th.ln().powi(2);
        assert!((back - th).abs() < bound, "{} vs {bound}", back - th);
        assert!((back - th).abs() > 0.0);
    }

    #[test]
    fn guard_rejects_large_theta() {
        assert!(w_of_theta(10.0, 1.0).is_err());
        assert!(w_of_theta(10.0, 0.05).is_ok());
    }

    #[test]
    fn k0_is_minkowski_without_delta() {
        let ds = ExpansionHistory::de_sitter(1.0, 1.0).unwrap();
        // Static a = 1 is excluded (H = 0), so use de Sitter at t = 0 where a = 1, δ = 0.
        for (th, r) in [(0.3, 0.1), (0.05, 0.2), (0.0, 0.4)] {
            let k = renormalizer_correlation(&ds, 0.0, th, r).unwrap();
            let m = vacuum_correlation(&SpacetimeInterval::new(th, r)).unwrap();
            assert!(((k - m) / m).abs() < 1e-13, "{k} vs {m}");
        }
    }

    #[test]
    fn k0_is_even() {
        let h = ExpansionHistory::power_law(2.0 / 3.0).unwrap();
        for th in [0.01, 0.07, 0.3] {
            let a = renormalizer_correlation(&h, 1.0, th, 0.05).unwrap();
            let b = renormalizer_correlation(&h, 1.0, -th, 0.05).unwrap();
            assert!((a - b).abs() <= 1e-14 * a.abs());
        }
    }

    #[test]
    fn k0_close_to_vacuum_at_equal_times() {
        let h = ExpansionHistory::power_law(0.5).unwrap();
        let t = 10.0;
        let s = h.state(t).unwrap();
        let delta = 2.0 / (t * t);
        for r in [1e-3, 1e-2] {
            let k = renormalizer_correlation(&h, t, 0.0, r).unwrap();
            let m = vacuum_correlation(&SpacetimeInterval::new(0.0, r)).unwrap();
            let th0 = s.a * r;
            let scale = delta * th0 * th0 * th0.ln().abs();
            assert!(((k - m) / m).abs() < scale, "{r}: {} vs {scale}", (k - m) / m);
        }
    }

    #[test]
    fn pole_hit_is_singular() {
        let h = ExpansionHistory::power_law(2.0 / 3.0).unwrap();
        assert!(matches!(
            renormalizer_correlation(&h, 1.0, 0.1, 0.1),
            Err(Error::Singularity(_))
        ));
        assert!(matches!(
            renormalizer_correlation(&h, 1.0, -0.1, 0.1),
            Err(Error::Singularity(_))
        ));
        assert!(renormalizer_correlation(&h, 1.0, 0.1, 0.0).is_err());
    }
}
