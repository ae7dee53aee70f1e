//! Bracketed root finding (Brent's method).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    /// f(root).
    pub residual: f64,
    pub iterations: usize,
    /// Final bracket (lo, hi) with lo ≤ root ≤ hi.
    pub bracket: (f64, f64),
}

pub const MAX_ITER: usize = 300;

/// Finds a zero of `f` in [lo, hi].
///
/// Stops when |f(root)| ≤ `tol` or when the bracket has shrunk to
/// `tol`·|root| (plus a few ulps so a root at zero terminates).
pub fn brent_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<RootResult> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::domain(format!(
            "non-finite function value at bracket ends [{lo}, {hi}]"
        )));
    }
    if fa == 0.0 {
        return Ok(done(a, fa, 0, lo, hi));
    }
    if fb == 0.0 {
        return Ok(done(b, fb, 0, lo, hi));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let xtol = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol * b.abs() + 1e-300;
        let m = 0.5 * (c - b);
        if fb.abs() <= tol || m.abs() <= xtol || fb == 0.0 {
            let (x, y) = if b < c { (b, c) } else { (c, b) };
            return Ok(done(b, fb, iter, x, y));
        }
        if e.abs() >= xtol && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation, or secant when a == c.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0)),
                    (qa - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (xtol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > xtol { d } else { xtol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::domain(format!("non-finite function value at {b}")));
        }
    }
    Err(Error::Accuracy {
        reason: format!("Brent iteration did not converge in {MAX_ITER} steps"),
        estimate: b,
        error: (c - b).abs(),
    })
}

fn done(root: f64, residual: f64, iterations: usize, lo: f64, hi: f64) -> RootResult {
    RootResult {
        root,
        residual,
        iterations,
        bracket: (lo.min(root), hi.max(root)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = brent_root(|x| x * x - 2.0, 1.0, 2.0, 1e-14).unwrap();
        assert!((r.root - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.bracket.0 <= r.root && r.root <= r.bracket.1);
        assert!(r.residual.abs() <= 1e-14 || (r.bracket.1 - r.bracket.0) <= 1e-14 * r.root.abs() + 1e-15);
    }

    #[test]
    fn cosine() {
        let r = brent_root(f64::cos, 1.0, 2.0, 1e-15).unwrap();
        assert!((r.root - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn root_at_zero() {
        let r = brent_root(|x| x * (1.0 + x * x), -1.0, 0.5, 1e-300).unwrap();
        assert!(r.root.abs() < 1e-200);
    }

    #[test]
    fn no_sign_change() {
        let e = brent_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(e, Error::Bracket { .. }));
    }

    #[test]
    fn reversed_bracket_is_fine() {
        let r = brent_root(|x| x - 0.25, 1.0, 0.0, 1e-14).unwrap();
        assert!((r.root - 0.25).abs() < 1e-14);
    }
}
