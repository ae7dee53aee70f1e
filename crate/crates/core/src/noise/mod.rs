//! Gaussian noise of the conformal vacuum synthesized as a random mode sum,
//! and Monte Carlo estimates of its two-point correlation.
//!
//! A realization is field(t, x) = Σ Re[c N e^{i(k x − ω τ(t))}] with c a
//! standard complex Gaussian, ω = |k| in natural units and τ the conformal
//! time. Each realization draws from its own substream of the seed, so
//! results do not depend on the number of threads.

mod export;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::conformal_time;
use crate::history::ExpansionHistory;
use crate::numerics::rng::ComplexGaussianStream;

pub use export::{export_grid, parse_grid_csv, write_csv, write_pgm, write_svg, GridFormat};

/// How the modes are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModeGeometry {
    /// Modes along the x axis: k ∈ {+1, −1, +2, −2, …}·2π/L with
    /// N = 1/√(n ω). The covariance of this field is logarithmic.
    Line,
    /// A line through an isotropic three-dimensional field: wave numbers
    /// k_j = 2πj/L with a fresh random direction cosine per realization and
    /// N_j² ∝ k_j e^{−k_j/k_c}. The covariance then approximates
    /// 1/(r² − τ²) for separations well above 1/k_c.
    Isotropic { k_cutoff: f64 },
}

/// Sampling grid and mode content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub t_axis: Vec<f64>,
    pub x_axis: Vec<f64>,
    pub n_modes: usize,
    /// Length L of the periodic box that fixes the mode spacing 2π/L.
    pub box_length: f64,
    pub geometry: ModeGeometry,
}

impl NoiseSpec {
    /// Line geometry, the default mode count and L = 4·max|x|.
    pub fn new(t_axis: Vec<f64>, x_axis: Vec<f64>) -> Self {
        let span = x_axis.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        Self {
            t_axis,
            x_axis,
            n_modes: crate::defaults::NOISE_MODES,
            box_length: if span > 0.0 { 4.0 * span } else { 1.0 },
            geometry: ModeGeometry::Line,
        }
    }

    pub fn with_modes(mut self, n: usize) -> Self {
        self.n_modes = n;
        self
    }

    pub fn with_box_length(mut self, l: f64) -> Self {
        self.box_length = l;
        self
    }

    pub fn with_geometry(mut self, g: ModeGeometry) -> Self {
        self.geometry = g;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::domain("at least one mode is needed"));
        }
        if !(self.box_length > 0.0 && self.box_length.is_finite()) {
            return Err(Error::domain(format!(
                "box length must be positive, got {}",
                self.box_length
            )));
        }
        if let ModeGeometry::Isotropic { k_cutoff } = self.geometry {
            if !(k_cutoff > 0.0 && k_cutoff.is_finite()) {
                return Err(Error::domain(format!(
                    "cutoff wave number must be positive, got {k_cutoff}"
                )));
            }
        }
        if self.t_axis.iter().chain(&self.x_axis).any(|v| !v.is_finite()) {
            return Err(Error::domain("grid axes must be finite"));
        }
        Ok(())
    }

    fn spacing(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Signed wave number along x, frequency and normalization N per mode.
    fn spectrum(&self) -> Vec<(f64, f64, f64)> {
        let dk = self.spacing();
        let n = self.n_modes;
        match self.geometry {
            ModeGeometry::Line => (1..=n)
                .map(|m| {
                    let k = m.div_ceil(2) as f64 * dk;
                    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                    (sign * k, k, 1.0 / (n as f64 * k).sqrt())
                })
                .collect(),
            ModeGeometry::Isotropic { k_cutoff } => {
                let w: Vec<f64> = (1..=n)
                    .map(|j| {
                        let k = j as f64 * dk;
                        k * (-k / k_cutoff).exp()
                    })
                    .collect();
                let total: f64 = w.iter().sum();
                (1..=n)
                    .zip(&w)
                    .map(|(j, &wj)| {
                        let k = j as f64 * dk;
                        (k, k, (wj / total).sqrt())
                    })
                    .collect()
            }
        }
    }
}

/// One realization: wave number along x, frequency and complex amplitude
/// c·N of every mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSum {
    modes: Vec<(f64, f64, Complex64)>,
}

impl ModeSum {
    /// Realization `index` of `seed`.
    pub fn draw(spec: &NoiseSpec, seed: u64, index: u64) -> Result<Self> {
        spec.validate()?;
        let mut rng = ComplexGaussianStream::with_stream(seed, index);
        let isotropic = matches!(spec.geometry, ModeGeometry::Isotropic { .. });
        let modes = spec
            .spectrum()
            .into_iter()
            .map(|(k, omega, norm)| {
                let c = rng.next_complex();
                let kx = if isotropic { k * rng.uniform(-1.0, 1.0) } else { k };
                (kx, omega, c * norm)
            })
            .collect();
        Ok(Self { modes })
    }

    /// Realization with given amplitudes c. Isotropic modes point along +x.
    pub fn with_amplitudes(spec: &NoiseSpec, amplitudes: &[Complex64]) -> Result<Self> {
        spec.validate()?;
        if amplitudes.len() != spec.n_modes {
            return Err(Error::domain(format!(
                "{} amplitudes given for {} modes",
                amplitudes.len(),
                spec.n_modes
            )));
        }
        let modes = spec
            .spectrum()
            .into_iter()
            .zip(amplitudes)
            .map(|((k, omega, norm), &c)| (k, omega, c * norm))
            .collect();
        Ok(Self { modes })
    }

    /// Field value at conformal time τ and comoving position x.
    pub fn field(&self, tau: f64, x: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(k, omega, amp)| {
                let phase = k * x - omega * tau;
                amp.re * phase.cos() - amp.im * phase.sin()
            })
            .sum()
    }
}

/// A sampled field: `values[i * x_axis.len() + j]` is the field at
/// (t_axis[i], x_axis[j]).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseGrid {
    pub t_axis: Vec<f64>,
    pub x_axis: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
    pub n_modes: usize,
}

impl NoiseGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.x_axis.len() + j]
    }
}

/// Conformal time of each t relative to `origin`.
fn conformal_times(history: &ExpansionHistory, origin: f64, ts: &[f64]) -> Result<Vec<f64>> {
    ts.iter().map(|&t| conformal_time(history, origin, t)).collect()
}

/// Realization 0 of `seed` on the grid of `spec`, with conformal time
/// measured from the first t sample.
pub fn synthesize(history: &ExpansionHistory, spec: &NoiseSpec, seed: u64) -> Result<NoiseGrid> {
    let modes = ModeSum::draw(spec, seed, 0)?;
    synthesize_from(history, spec, &modes, seed)
}

/// Samples a given realization on the grid of `spec`.
pub fn synthesize_from(history: &ExpansionHistory, spec: &NoiseSpec, modes: &ModeSum, seed: u64) -> Result<NoiseGrid> {
    spec.validate()?;
    let origin = spec.t_axis.first().copied().unwrap_or(0.0);
    let taus = conformal_times(history, origin, &spec.t_axis)?;
    let values: Vec<f64> = taus
        .par_iter()
        .flat_map_iter(|&tau| spec.x_axis.iter().map(move |&x| modes.field(tau, x)))
        .collect();
    Ok(NoiseGrid {
        t_axis: spec.t_axis.clone(),
        x_axis: spec.x_axis.clone(),
        values,
        seed,
        n_modes: spec.n_modes,
    })
}

/// Field values at `points` (t, x) for realizations 0..n of `seed`, one
/// row per realization.
pub fn sample_points(
    history: &ExpansionHistory,
    spec: &NoiseSpec,
    seed: u64,
    n_realizations: usize,
    points: &[(f64, f64)],
) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    let origin = points.first().map(|p| p.0).unwrap_or(0.0);
    let ts: Vec<f64> = points.iter().map(|p| p.0).collect();
    let taus = conformal_times(history, origin, &ts)?;
    (0..n_realizations as u64)
        .into_par_iter()
        .map(|i| {
            let m = ModeSum::draw(spec, seed, i)?;
            Ok(taus.iter().zip(points).map(|(&tau, p)| m.field(tau, p.1)).collect())
        })
        .collect()
}

/// Ensemble mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

/// ⟨field(t₁, x₁)·field(t₂, x₂)⟩ over realizations 0..n of `seed`.
pub fn empirical_correlation(
    history: &ExpansionHistory,
    spec: &NoiseSpec,
    seed: u64,
    n_realizations: usize,
    p1: (f64, f64),
    p2: (f64, f64),
) -> Result<CorrelationEstimate> {
    if n_realizations < 2 {
        return Err(Error::domain("need at least two realizations"));
    }
    let rows = sample_points(history, spec, seed, n_realizations, &[p1, p2])?;
    let n = rows.len() as f64;
    let products: Vec<f64> = rows.iter().map(|r| r[0] * r[1]).collect();
    let mean = products.iter().sum::<f64>() / n;
    let var = products.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(CorrelationEstimate {
        mean,
        std_error: (var / n).sqrt(),
        n: rows.len(),
    })
}

/// The ensemble covariance the estimator converges to:
/// Σ ½N² cos(kΔx − ωΔτ) on the line, Σ ½N² sinc(kΔx) cos(kΔτ) for the
/// isotropic field.
pub fn expected_covariance(
    history: &ExpansionHistory,
    spec: &NoiseSpec,
    p1: (f64, f64),
    p2: (f64, f64),
) -> Result<f64> {
    spec.validate()?;
    let dtau = conformal_time(history, p1.0, p2.0)?;
    let dx = p2.1 - p1.1;
    let iso = matches!(spec.geometry, ModeGeometry::Isotropic { .. });
    Ok(spec
        .spectrum()
        .into_iter()
        .map(|(k, omega, norm)| {
            let shape = if iso {
                let u = k * dx;
                let sinc = if u == 0.0 { 1.0 } else { u.sin() / u };
                sinc * (omega * dtau).cos()
            } else {
                (k * dx - omega * dtau).cos()
            };
            0.5 * norm * norm * shape
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ExpansionHistory {
        ExpansionHistory::static_medium(1.0).unwrap()
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn line_spectrum_is_symmetric() {
        let s = NoiseSpec::new(vec![0.0], vec![0.0, 1.0])
            .with_box_length(2.0 * PI)
            .with_modes(4);
        let ks: Vec<f64> = s.spectrum().iter().map(|m| m.0).collect();
        assert_eq!(ks, vec![1.0, -1.0, 2.0, -2.0]);
        let norms: Vec<f64> = s.spectrum().iter().map(|m| m.2).collect();
        assert!((norms[2] - 1.0 / 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn isotropic_weights_normalized() {
        let s = NoiseSpec::new(vec![0.0], vec![0.0])
            .with_modes(100)
            .with_geometry(ModeGeometry::Isotropic { k_cutoff: 2.0 });
        let total: f64 = s.spectrum().iter().map(|m| m.2 * m.2).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn same_seed_same_grid() {
        let h = ExpansionHistory::power_law(2.0 / 3.0).unwrap();
        let s = NoiseSpec::new(axis(0.5, 1.5, 9), axis(-1.0, 1.0, 11));
        let a = synthesize(&h, &s, 7).unwrap();
        let b = synthesize(&h, &s, 7).unwrap();
        assert_eq!(a, b);
        let c = synthesize(&h, &s, 8).unwrap();
        assert_ne!(a.values, c.values);
        assert_eq!(a.values.len(), 99);
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let h = ExpansionHistory::power_law(0.5).unwrap();
        let s = NoiseSpec::new(vec![-1.0, 1.0], vec![0.0]);
        assert!(matches!(synthesize(&h, &s, 1), Err(Error::Domain(_))));
        assert!(synthesize(&h, &NoiseSpec::new(vec![1.0], vec![0.0]).with_modes(0), 1).is_err());
    }

    #[test]
    fn single_mode_travels_at_unit_speed() {
        let spec = NoiseSpec::new(vec![0.0], vec![0.0])
            .with_modes(1)
            .with_box_length(2.0 * PI);
        let m = ModeSum::with_amplitudes(&spec, &[Complex64::new(1.0, 0.0)]).unwrap();
        // Crest of cos(x − τ) near x = τ, located on a fine grid.
        let crest = |tau: f64| {
            let xs = axis(tau - 1.0, tau + 1.0, 20001);
            xs.into_iter()
                .max_by(|a, b| m.field(tau, *a).total_cmp(&m.field(tau, *b)))
                .unwrap()
        };
        let v = (crest(1.7) - crest(0.2)) / 1.5;
        assert!((v - 1.0).abs() < 1e-2, "{v}");
    }

    #[test]
    fn period_in_cosmic_time_grows_with_a() {
        use crate::numerics::roots::brent_root;
        // Crests at x = 0 sit at conformal times 2πn/k. Their spacing in
        // cosmic time is a·2π/k, so it grows by e between t = 0 and t = 1
        // for de Sitter with H = 1.
        let h = ExpansionHistory::de_sitter(1.0, 1.0).unwrap();
        let k = 100.0;
        let spec = NoiseSpec::new(vec![0.0], vec![0.0])
            .with_modes(1)
            .with_box_length(2.0 * PI / k);
        let m = ModeSum::with_amplitudes(&spec, &[Complex64::new(1.0, 0.0)]).unwrap();
        let crest_time = |n: f64| {
            let target = 2.0 * PI * n / k;
            brent_root(|t| conformal_time(&h, 0.0, t).unwrap() - target, 0.0, 2.0, 1e-14)
                .unwrap()
                .root
        };
        let tau1 = 1.0 - (-1.0f64).exp();
        let n1 = (tau1 * k / (2.0 * PI)).round();
        assert!((m.field(2.0 * PI * n1 / k, 0.0) - m.field(0.0, 0.0)).abs() < 1e-9);
        let early = crest_time(1.0) - crest_time(0.0);
        let late = crest_time(n1 + 1.0) - crest_time(n1);
        let t_mid = 0.5 * (crest_time(n1 + 1.0) + crest_time(n1));
        let ratio = late / early;
        let expect = (t_mid - 0.5 * early).exp();
        assert!((ratio / expect - 1.0).abs() < 1e-2, "{ratio} vs {expect}");
    }

    #[test]
    fn coincident_points_have_positive_variance() {
        let s = NoiseSpec::new(vec![0.0], vec![0.0]).with_modes(16);
        let e = empirical_correlation(&unit(), &s, 3, 400, (0.3, 0.1), (0.3, 0.1)).unwrap();
        assert!(e.mean > 0.0);
        let expect = expected_covariance(&unit(), &s, (0.3, 0.1), (0.3, 0.1)).unwrap();
        assert!((e.mean - expect).abs() < 4.0 * e.std_error);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let s = NoiseSpec::new(vec![0.0], vec![0.0]).with_modes(8);
        let a = empirical_correlation(&unit(), &s, 11, 300, (0.0, 0.0), (0.5, 0.2)).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| empirical_correlation(&unit(), &s, 11, 300, (0.0, 0.0), (0.5, 0.2)).unwrap());
        assert_eq!(a, b);
    }
}
