//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Tabulated to the published digits.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Smallest absolute error the integrator is asked to reach.
pub const ABS_FLOOR: f64 = 1e-300;
/// Error level, relative to ∫|f|, below which roundoff dominates.
const ROUNDOFF: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Substitutions that remove an inverse-square-root endpoint singularity.
///
/// `InvSqrtLower` integrates over u with x = a + u², which turns an
/// integrand behaving like (x − a)^{-1/2} into a smooth one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EndpointHint {
    #[default]
    None,
    InvSqrtLower,
    InvSqrtUpper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint: EndpointHint,
    /// Interior points where the integrand has structure (spikes, kinks).
    /// The interval is split there before adaptation starts.
    pub breakpoints: Vec<f64>,
}

impl QuadOptions {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn endpoint(mut self, hint: EndpointHint) -> Self {
        self.endpoint = hint;
        self
    }

    pub fn breakpoints(mut self, points: Vec<f64>) -> Self {
        self.breakpoints = points;
        self
    }

    pub fn abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: ABS_FLOOR,
            max_subdivisions: 4000,
            endpoint: EndpointHint::None,
            breakpoints: Vec::new(),
        }
    }
}

/// ∫ₐᵇ f(x) dx to relative tolerance `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult> {
    integrate_with(f, a, b, &QuadOptions::new(rel_tol))
}

pub fn integrate_with<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::domain(format!("integration needs finite a < b, got [{a}, {b}]")));
    }
    let inside = |p: &f64| *p > a && *p < b;
    match opts.endpoint {
        EndpointHint::None => {
            let pts: Vec<f64> = opts.breakpoints.iter().copied().filter(inside).collect();
            adapt(&f, a, b, &pts, opts)
        }
        EndpointHint::InvSqrtLower => {
            let g = |u: f64| 2.0 * u * f(a + u * u);
            let pts: Vec<f64> = opts
                .breakpoints
                .iter()
                .filter(|p| inside(p))
                .map(|p| (p - a).sqrt())
                .collect();
            adapt(&g, 0.0, (b - a).sqrt(), &pts, opts)
        }
        EndpointHint::InvSqrtUpper => {
            let g = |u: f64| 2.0 * u * f(b - u * u);
            let mut pts: Vec<f64> = opts
                .breakpoints
                .iter()
                .filter(|p| inside(p))
                .map(|p| (b - p).sqrt())
                .collect();
            pts.reverse();
            adapt(&g, 0.0, (b - a).sqrt(), &pts, opts)
        }
    }
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
/// Returns (value, error estimate, ∫|f|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    let mut fv = [0.0; 14];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let value = kronrod * half;
    let resabs = abs_sum * half.abs();
    let resasc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err, resabs)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breaks: &[f64], opts: &QuadOptions) -> Result<QuadratureResult> {
    let mut edges = Vec::with_capacity(breaks.len() + 2);
    edges.push(a);
    let mut sorted = breaks.to_vec();
    sorted.sort_by(f64::total_cmp);
    edges.extend(sorted);
    edges.push(b);
    edges.dedup();

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in edges.windows(2) {
        let (value, error, resabs) = gk15(f, w[0], w[1]);
        evaluations += 15;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
            resabs,
        });
    }
    // Panels too narrow to split further are parked here.
    let mut frozen: Vec<Panel> = Vec::new();

    loop {
        let value: f64 = heap.iter().chain(frozen.iter()).map(|p| p.value).sum();
        let error: f64 = heap.iter().chain(frozen.iter()).map(|p| p.error).sum();
        if !value.is_finite() {
            return Err(Error::Accuracy {
                reason: "integrand produced a non-finite value".into(),
                estimate: value,
                error,
            });
        }
        let resabs: f64 = heap.iter().chain(frozen.iter()).map(|p| p.resabs).sum();
        let tol = opts.abs_tol.max(ABS_FLOOR).max(opts.rel_tol * value.abs());
        // The second test accepts results whose error is at the roundoff
        // level of the sum, e.g. integrals that cancel to zero.
        if error <= tol || error <= ROUNDOFF * resabs {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        let done = heap.len() + frozen.len() >= opts.max_subdivisions;
        let Some(worst) = heap.pop() else {
            return Err(Error::Accuracy {
                reason: "roundoff limits the attainable accuracy".into(),
                estimate: value,
                error,
            });
        };
        if done {
            return Err(Error::Accuracy {
                reason: format!("no convergence after {} subdivisions", opts.max_subdivisions),
                estimate: value,
                error,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if (worst.b - worst.a) <= 1e3 * f64::EPSILON * scale || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        let (v1, e1, r1) = gk15(f, worst.a, mid);
        let (v2, e2, r2) = gk15(f, mid, worst.b);
        evaluations += 30;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            resabs: r1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            resabs: r2,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand() {
        let r = integrate(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!(r.error_estimate >= 0.0);
        assert!(r.evaluations >= 1);
    }

    #[test]
    fn inverse_sqrt_with_hint() {
        let opts = QuadOptions::new(1e-12).endpoint(EndpointHint::InvSqrtLower);
        let r = integrate_with(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);

        let opts = QuadOptions::new(1e-12).endpoint(EndpointHint::InvSqrtUpper);
        let r = integrate_with(|x: f64| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, &opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_without_hint_still_converges_loosely() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-6).unwrap();
        assert!((r.value - 2.0).abs() < 1e-5);
    }

    #[test]
    fn narrow_spike_resolved_by_breakpoints() {
        let s = 1e-4;
        let g = |x: f64| (-(x - 0.3f64).powi(2) / (2.0 * s * s)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt());
        let opts = QuadOptions::new(1e-10).breakpoints(vec![0.3 - 8.0 * s, 0.3, 0.3 + 8.0 * s]);
        let r = integrate_with(g, -1.0, 1.0, &opts).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_reversed_interval() {
        assert!(matches!(integrate(|x| x, 1.0, 0.0, 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn non_integrable_reports_accuracy() {
        let opts = QuadOptions {
            max_subdivisions: 50,
            ..QuadOptions::new(1e-12)
        };
        let r = integrate_with(|x: f64| 1.0 / x, 0.0, 1.0, &opts);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }

    #[test]
    fn oscillatory() {
        let r = integrate(|x: f64| (50.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-10).unwrap();
        assert!((r.value - 0.0).abs() < 1e-9);
        let r = integrate(|x: f64| x.cos(), 0.0, 1.0, 1e-13).unwrap();
        assert!((r.value - 1f64.sin()).abs() < 1e-14);
    }
}
