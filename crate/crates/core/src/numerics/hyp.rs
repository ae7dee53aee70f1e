//! Gauss hypergeometric function ₂F₁ for real parameters and z ≤ 0.

use crate::error::{Error, Result};

/// Relative size of the last series term kept.
pub const SERIES_TOL: f64 = 1e-16;
/// Maximum number of series terms.
pub const MAX_TERMS: usize = 100_000;

/// ₂F₁(a, b; c; z) for z ≤ 0.
///
/// For z < −½ the Pfaff transformation
/// ₂F₁(a,b;c;z) = (1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1))
/// moves the series argument into [⅓, 1).
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if c <= 0.0 && c == c.round() {
        return Err(Error::domain(format!("c = {c} is a non-positive integer")));
    }
    if !z.is_finite() || z > 0.0 {
        return Err(Error::domain(format!("hyp2f1 is implemented for z ≤ 0, got {z}")));
    }
    if z < -0.5 {
        let zt = z / (z - 1.0);
        Ok((1.0 - z).powf(-a) * series(a, c - b, c, zt)?)
    } else {
        series(a, b, c, z)
    }
}

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..MAX_TERMS {
        let k = n as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if term == 0.0 || term.abs() <= SERIES_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy {
        reason: format!("hypergeometric series did not converge in {MAX_TERMS} terms"),
        estimate: sum,
        error: term.abs(),
    })
}
