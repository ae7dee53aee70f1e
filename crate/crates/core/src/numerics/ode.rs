//! Adaptive Dormand–Prince 5(4) integration of a scalar ODE with cubic
//! Hermite dense output.

use crate::error::{Error, Result};

/// Accepted steps of y′ = f(t, y) with values and slopes at each node.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    ts: Vec<f64>,
    ys: Vec<f64>,
    dys: Vec<f64>,
}

impl DenseSolution {
    pub fn t_min(&self) -> f64 {
        self.ts[0]
    }

    pub fn t_max(&self) -> f64 {
        self.ts[self.ts.len() - 1]
    }

    pub fn steps(&self) -> usize {
        self.ts.len() - 1
    }

    /// Cubic Hermite interpolant of y at `t`, or `None` outside the range.
    pub fn eval(&self, t: f64) -> Option<f64> {
        if !(t >= self.t_min() && t <= self.t_max()) {
            return None;
        }
        let i = match self.ts.partition_point(|&x| x <= t) {
            0 => 0,
            k if k >= self.ts.len() => self.ts.len() - 2,
            k => k - 1,
        };
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        Some(h00 * self.ys[i] + h10 * h * self.dys[i] + h01 * self.ys[i + 1] + h11 * h * self.dys[i + 1])
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 1_000_000;

/// Integrates y′ = f(t, y) from (t0, y0) to `t_end` (either direction).
///
/// The local error per step is held below `atol + rtol·|y|`. The step is
/// additionally capped at `max_step(t, y)` so the Hermite interpolant and
/// its derivative stay accurate between nodes.
pub fn solve<F, M>(f: F, t0: f64, y0: f64, t_end: f64, rtol: f64, atol: f64, max_step: M) -> Result<DenseSolution>
where
    F: Fn(f64, f64) -> f64,
    M: Fn(f64, f64) -> f64,
{
    if !(t0.is_finite() && t_end.is_finite() && y0.is_finite()) || t0 == t_end {
        return Err(Error::domain(format!("bad ODE interval [{t0}, {t_end}]")));
    }
    let dir = (t_end - t0).signum();
    let span = (t_end - t0).abs();
    let cap = |t: f64, y: f64| max_step(t, y).min(span);
    let mut ts = vec![t0];
    let mut ys = vec![y0];
    let mut k0 = f(t0, y0);
    let mut dys = vec![k0];
    let (mut t, mut y) = (t0, y0);
    let mut h = (1e-3 * span).min(cap(t0, y0));

    for _ in 0..MAX_STEPS {
        if (t_end - t) * dir <= 0.0 {
            if dir < 0.0 {
                ts.reverse();
                ys.reverse();
                dys.reverse();
            }
            return Ok(DenseSolution { ts, ys, dys });
        }
        let last = (t_end - t).abs() <= h * (1.0 + 1e-12);
        let hs = if last { (t_end - t).abs() } else { h };
        let step = hs * dir;

        let mut k = [0.0; 7];
        k[0] = k0;
        for s in 1..7 {
            let mut acc = y;
            for j in 0..s {
                acc += step * A[s][j] * k[j];
            }
            k[s] = f(t + C[s] * step, acc);
        }
        let y_new = y + step * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
        let err = (step * (0..7).map(|j| E[j] * k[j]).sum::<f64>()).abs();
        let scale = atol + rtol * y.abs().max(y_new.abs());
        let ratio = err / scale;
        if !y_new.is_finite() || !ratio.is_finite() {
            h *= 0.25;
        } else if ratio <= 1.0 {
            t = if last { t_end } else { t + step };
            y = y_new;
            k0 = k[6];
            ts.push(t);
            ys.push(y);
            dys.push(k0);
            let grow = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (hs * grow).min(cap(t, y));
        } else {
            h = hs * (0.9 * ratio.powf(-0.2)).max(0.2);
        }
        if h <= 1e-14 * t.abs().max(span) {
            return Err(Error::Accuracy {
                reason: format!("ODE step size underflow at t = {t}"),
                estimate: y,
                error: f64::NAN,
            });
        }
    }
    Err(Error::Accuracy {
        reason: format!("ODE integration exceeded {MAX_STEPS} steps"),
        estimate: y,
        error: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let sol = solve(|_, y| y, 0.0, 1.0, 2.0, 1e-11, 1e-14, |_, _| 0.01).unwrap();
        for t in [0.0, 0.123, 1.0, 1.77, 2.0] {
            let y = sol.eval(t).unwrap();
            assert!((y - t.exp()).abs() < 1e-9 * t.exp(), "t={t}: {y}");
        }
        assert!(sol.eval(2.1).is_none());
    }

    #[test]
    fn backwards_in_time() {
        let sol = solve(|t, _| t.cos(), 1.0, 1f64.sin(), -2.0, 1e-11, 1e-14, |_, _| 0.01).unwrap();
        assert_eq!(sol.t_min(), -2.0);
        for t in [-2.0, -0.5, 0.9] {
            let y = sol.eval(t).unwrap();
            assert!((y - t.sin()).abs() < 1e-9, "t={t}: {y} vs {}", t.sin());
        }
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(solve(|_, y| y, 1.0, 1.0, 1.0, 1e-8, 1e-12, |_, _| 1.0).is_err());
    }
}
