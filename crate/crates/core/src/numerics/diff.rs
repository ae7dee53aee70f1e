//! Finite-difference derivative estimates.

use std::ops::{Add, Mul, Sub};

/// Values a finite-difference stencil can combine: reals and complex numbers.
pub trait Stencil: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}
impl<T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>> Stencil for T {}

fn central<T: Stencil, F: Fn(f64) -> T>(f: &F, t: f64, order: u8, h: f64) -> T {
    match order {
        1 => (f(t + h) - f(t - h)) * (0.5 / h),
        2 => (f(t + h) - f(t) * 2.0 + f(t - h)) * (1.0 / (h * h)),
        3 => (f(t + 2.0 * h) - f(t + h) * 2.0 + f(t - h) * 2.0 - f(t - 2.0 * h)) * (0.5 / (h * h * h)),
        _ => panic!("fd_derivative supports orders 1, 2 and 3, got {order}"),
    }
}

/// Central-difference estimate of the `order`-th derivative of `f` at `t`.
///
/// The second-order stencils are evaluated at h, h/2 and h/4 and combined
/// in a Richardson tableau, so the truncation error is O(h⁶). The caller
/// owns the step: too small a step amplifies roundoff by ε/hᵒʳᵈᵉʳ.
///
/// # Panics
/// If `order` is not 1, 2 or 3.
pub fn fd_derivative<T: Stencil, F: Fn(f64) -> T>(f: F, t: f64, order: u8, h: f64) -> T {
    let d0 = central(&f, t, order, h);
    let d1 = central(&f, t, order, 0.5 * h);
    let d2 = central(&f, t, order, 0.25 * h);
    let r1 = (d1 * 4.0 - d0) * (1.0 / 3.0);
    let r2 = (d2 * 4.0 - d1) * (1.0 / 3.0);
    (r2 * 16.0 - r1) * (1.0 / 15.0)
}

/// Fornberg weights for derivatives 0..=max_order at `x0` on the nodes `xs`.
///
/// `weights[m][j]` multiplies f(xs[j]) in the m-th derivative.
pub fn fornberg_weights(x0: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut w = vec![vec![0.0; n]; max_order + 1];
    w[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

/// Which side of the evaluation point a one-sided stencil samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// First three derivatives at `s` from the seven points s, s ± h, …, s ± 6h
/// on one side only. Used where the function has a kink at `s` and the
/// one-sided limits are wanted. Truncation errors are O(h⁶), O(h⁵), O(h⁴).
pub fn one_sided_derivatives<T: Stencil, F: Fn(f64) -> T>(f: F, s: f64, h: f64, side: Side) -> [T; 3] {
    let step = match side {
        Side::Left => -h,
        Side::Right => h,
    };
    let xs: Vec<f64> = (0..7).map(|j| j as f64 * step).collect();
    let w = fornberg_weights(0.0, &xs, 3);
    let vals: Vec<T> = xs.iter().map(|&x| f(s + x)).collect();
    let combine = |m: usize| {
        let mut acc = vals[0] * w[m][0];
        for j in 1..7 {
            acc = acc + vals[j] * w[m][j];
        }
        acc
    };
    [combine(1), combine(2), combine(3)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn sine_slope_at_origin() {
        assert!((fd_derivative(f64::sin, 0.0, 1, 1e-2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_third_derivative() {
        for t in [-3.0, 0.0, 1.7] {
            let d = fd_derivative(|x: f64| x * x * x, t, 3, 1e-1);
            assert!((d - 6.0).abs() < 1e-9, "{d}");
        }
    }

    #[test]
    fn exponential_second_derivative() {
        let d = fd_derivative(|x: f64| (2.0 * x).exp(), 0.0, 2, 1e-2);
        assert!((d - 4.0).abs() < 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let f = |x: f64| (1.3 * x).exp() * x.cos();
        let exact = {
            let x: f64 = 0.4;
            (1.3 * x).exp() * (1.3 * x.cos() - x.sin())
        };
        let e1 = (fd_derivative(f, 0.4, 1, 0.2) - exact).abs();
        let e2 = (fd_derivative(f, 0.4, 1, 0.1) - exact).abs();
        assert!(e1 / e2 > 16.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn complex_values() {
        let f = |x: f64| Complex64::new(x.cos(), x.sin());
        let d = fd_derivative(f, 0.3, 1, 1e-2);
        assert!((d - Complex64::new(-(0.3f64).sin(), 0.3f64.cos())).norm() < 1e-11);
    }

    #[test]
    fn fornberg_reproduces_central_weights() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[1][0] + 0.5).abs() < 1e-15 && (w[1][2] - 0.5).abs() < 1e-15);
        assert!((w[2][0] - 1.0).abs() < 1e-15 && (w[2][1] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn one_sided_on_kinked_function() {
        // |x|³ is C² at 0; its third derivative jumps from −6 to 6.
        let f = |x: f64| x.abs().powi(3);
        let [d1r, d2r, d3r] = one_sided_derivatives(f, 0.0, 1e-2, Side::Right);
        let [d1l, d2l, d3l] = one_sided_derivatives(f, 0.0, 1e-2, Side::Left);
        assert!(d1r.abs() < 1e-10 && d1l.abs() < 1e-10);
        assert!(d2r.abs() < 1e-8 && d2l.abs() < 1e-8);
        assert!((d3r - 6.0).abs() < 1e-6 && (d3l + 6.0).abs() < 1e-6);
    }
}
