//! Independent oracles shared by the integration tests.
//!
//! Energy densities are rebuilt from correlation functions by applying
//! the electric and magnetic derivative operators directly:
//! u_E = −(ħa/c)(∂θ² − ¼∂t²)K, u_M = −(ħc/a)(∂r² + (2/r)∂r)K, ε = u/a³.
//! θ- and r-derivatives are exact (jets); t-derivatives are finite
//! differences at fixed θ and comoving r. Natural units ħ = c = 1.

#![allow(dead_code)]

use std::f64::consts::PI;

use cosmic_vacuum::history::ExpansionHistory;
use cosmic_vacuum::numerics::{fd_derivative, Jet2, Real};
use cosmic_vacuum::renorm::k0;

/// −1/(4π²(τ² − r²)) with τ(θ) from the truncated series at `t`.
fn bare_k<T: Real>(history: &ExpansionHistory, t: f64, theta: T, r: T) -> T {
    let s = history.state(t).unwrap();
    let c3 = (s.h * s.h - s.h_dot) / (24.0 * s.a);
    let c4 = s.h_ddot / (24.0 * s.a);
    let th2 = theta * theta;
    let sign = if theta.value() < 0.0 { -1.0 } else { 1.0 };
    let tau = theta / s.a + theta * th2 * c3 + th2 * th2 * (sign * c4);
    -T::cst(1.0) / ((tau * tau - r * r) * (4.0 * PI * PI))
}

fn time_step(history: &ExpansionHistory, t: f64) -> f64 {
    let s = history.state(t).unwrap();
    let (lo, _) = history.domain();
    let h = if s.h != 0.0 { 1e-2 / s.h.abs() } else { 1e-2 };
    if lo.is_finite() {
        h.min(0.2 * (t - lo))
    } else {
        h
    }
}

/// Applies the operators to a correlation K(t, θ, r) supplied for jets.
/// `lap_at_zero` switches the Laplacian to its r → 0 limit 3∂r².
fn energies<F>(history: &ExpansionHistory, t: f64, theta: f64, r: f64, k: F) -> (f64, f64)
where
    F: Fn(f64, Jet2, Jet2) -> Jet2,
{
    let a = history.state(t).unwrap().a;
    let kt = k(t, Jet2::variable(theta), Jet2::constant(r));
    let dt2 = fd_derivative(
        |tt| k(tt, Jet2::constant(theta), Jet2::constant(r)).v,
        t,
        2,
        time_step(history, t),
    );
    let u_e = -a * (kt.d2 - 0.25 * dt2);
    let kr = k(t, Jet2::constant(theta), Jet2::variable(r));
    let lap = if r == 0.0 { 3.0 * kr.d2 } else { kr.d2 + 2.0 * kr.d1 / r };
    let u_m = -lap / a;
    (u_e / a.powi(3), u_m / a.powi(3))
}

/// Bare densities at θ = 0 and proper separation ℓ.
pub fn bare_energy_oracle(history: &ExpansionHistory, t: f64, ell: f64) -> (f64, f64) {
    let a = history.state(t).unwrap().a;
    energies(history, t, 0.0, ell / a, |tt, th, r| bare_k(history, tt, th, r))
}

/// Bare densities at r = 0 and time offset θ.
pub fn timelike_energy_oracle(history: &ExpansionHistory, t: f64, theta: f64) -> (f64, f64) {
    energies(history, t, theta, 0.0, |tt, th, r| bare_k(history, tt, th, r))
}

/// Renormalizer densities at θ = 0 and proper separation ℓ, using K₀ with
/// a and δ = Ḧ/H taken at each time of the t-stencil.
pub fn renormalizer_energy_oracle(history: &ExpansionHistory, t: f64, ell: f64) -> (f64, f64) {
    let a = history.state(t).unwrap().a;
    energies(history, t, 0.0, ell / a, |tt, th, r| {
        let s = history.state(tt).unwrap();
        k0(s.a, 1.0, s.h_ddot / s.h, th, r)
    })
}

/// Solves the square system m·x = b by Gaussian elimination with pivoting.
pub fn solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col].clone();
            for (x, p) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x
}

/// Coefficients (c₄, c₂) of c₄/ℓ⁴ + c₂/ℓ² from values at ℓ and ℓ/2.
pub fn richardson_2x2(e_full: f64, e_half: f64, ell: f64) -> (f64, f64) {
    let c4 = ell.powi(4) * (e_half - 4.0 * e_full) / 12.0;
    let c2 = ell * ell * (16.0 * e_full - e_half) / 12.0;
    (c4, c2)
}

/// Least-squares-free fit of Σ cᵢ x^{pᵢ} through as many samples as powers.
pub fn power_fit(xs: &[f64], ys: &[f64], powers: &[i32]) -> Vec<f64> {
    let m = xs
        .iter()
        .map(|&x| powers.iter().map(|&p| x.powi(p)).collect())
        .collect();
    solve(m, ys.to_vec())
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// a(t) = sinh^{2/3}(3t/2): the exact flat matter + Λ history with H → 1.
pub fn matter_lambda_history() -> ExpansionHistory {
    use cosmic_vacuum::history::HistoryState;
    ExpansionHistory::custom("matter+lambda", (0.0, f64::INFINITY), |t| {
        let x = 1.5 * t;
        let (sh, ch) = (x.sinh(), x.cosh());
        let coth = ch / sh;
        let csch2 = 1.0 / (sh * sh);
        Ok(HistoryState {
            a: sh.powf(2.0 / 3.0),
            h: coth,
            h_dot: -1.5 * csch2,
            h_ddot: 4.5 * csch2 * coth,
        })
    })
}

/// Prints one acceptance line and returns whether it passed.
pub fn report(name: &str, pass: bool, detail: &str) -> bool {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}
