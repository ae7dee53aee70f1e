//! Cauchy principal values of integrals with one simple pole.

use super::quad::{integrate_with, QuadOptions, QuadratureResult};
use crate::error::{Error, Result};

/// P∫ₐᵇ f(x) dx where `f` has a simple pole at `pole` inside (a, b).
///
/// The symmetric excision ∫ₐ^{p−ε} + ∫_{p+ε}^b is taken to the limit ε → 0
/// by folding the window of half-width δ = min(p − a, b − p) around the
/// pole: ∫₀^δ [f(p+u) + f(p−u)] du has a finite integrand, because the pole
/// contributions cancel pairwise. The remainder of the longer side is
/// integrated directly.
pub fn principal_value<F: Fn(f64) -> f64>(f: F, pole: f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    principal_value_with(f, pole, a, b, &QuadOptions::new(rel_tol)).map(|r| r.value)
}

pub fn principal_value_with<F: Fn(f64) -> f64>(
    f: F,
    pole: f64,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    if !(a < pole && pole < b) {
        return Err(Error::domain(format!(
            "pole {pole} must lie strictly inside ({a}, {b})"
        )));
    }
    let delta = (pole - a).min(b - pole);

    // Breakpoints on either side of the pole land on the folded axis at
    // their distance from it.
    let folded_breaks: Vec<f64> = opts
        .breakpoints
        .iter()
        .map(|&x| (x - pole).abs())
        .filter(|&u| u > 0.0 && u < delta)
        .collect();
    let folded_opts = QuadOptions {
        breakpoints: folded_breaks,
        ..opts.clone()
    };
    // Evaluate at p ± d with both points exact in floating point, so the
    // two sides see exactly opposite distances to the pole and the 1/d
    // parts cancel without roundoff noise. Snapping d onto the coarser of
    // the two grids around p settles in a step or two.
    let folded = |u: f64| {
        let mut d = u;
        for _ in 0..4 {
            let up = (pole + d) - pole;
            let next = pole - (pole - up);
            if next == d {
                break;
            }
            d = next;
        }
        if d == 0.0 || (pole + d) - pole != d || pole - (pole - d) != d {
            0.0
        } else {
            f(pole + d) + f(pole - d)
        }
    };
    let core = integrate_with(folded, 0.0, delta, &folded_opts)?;

    let mut total = core;
    let tail = if pole - a > delta {
        Some((a, pole - delta))
    } else if b - pole > delta {
        Some((pole + delta, b))
    } else {
        None
    };
    if let Some((lo, hi)) = tail {
        let r = integrate_with(&f, lo, hi, opts)?;
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
    }
    Ok(total)
}
