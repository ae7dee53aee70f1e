//! Expansion histories a(t) with H, Ḣ and Ḧ.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::ode::{self, DenseSolution};
use crate::numerics::quad::integrate;
use crate::params::{CosmologyParams, HubbleModel};

/// Scale factor and its rates at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistoryState {
    pub a: f64,
    pub h: f64,
    pub h_dot: f64,
    pub h_ddot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HistoryKind {
    DeSitter,
    PowerLaw { exponent: f64 },
    LcdmNumeric { modified: bool },
    Static,
    Custom { name: String },
}

type StateFn = dyn Fn(f64) -> Result<HistoryState> + Send + Sync;

#[derive(Clone)]
enum Repr {
    DeSitter {
        h: f64,
        a0: f64,
    },
    PowerLaw {
        p: f64,
    },
    Static {
        a: f64,
    },
    Numeric {
        model: HubbleModel,
        sol: Arc<DenseSolution>,
    },
    Custom(Arc<StateFn>),
}

/// A scale-factor model a(t). Immutable and cheap to clone.
#[derive(Clone)]
pub struct ExpansionHistory {
    kind: HistoryKind,
    domain: (f64, f64),
    repr: Repr,
}

impl fmt::Debug for ExpansionHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpansionHistory")
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .finish()
    }
}

/// Range of scale factors covered by a numerically integrated history.
pub const NUMERIC_A_RANGE: (f64, f64) = (1e-4, 10.0);
const MAX_EFOLDS_PER_STEP: f64 = 2e-3;

impl ExpansionHistory {
    /// a = a₀ e^{Ht}.
    pub fn de_sitter(h: f64, a0: f64) -> Result<Self> {
        if !(h > 0.0 && a0 > 0.0) {
            return Err(Error::domain(format!(
                "de Sitter needs H > 0 and a0 > 0, got H={h}, a0={a0}"
            )));
        }
        Ok(Self {
            kind: HistoryKind::DeSitter,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            repr: Repr::DeSitter { h, a0 },
        })
    }

    /// a = t^p for t > 0.
    pub fn power_law(p: f64) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::domain(format!("power-law exponent must be positive, got {p}")));
        }
        Ok(Self {
            kind: HistoryKind::PowerLaw { exponent: p },
            domain: (0.0, f64::INFINITY),
            repr: Repr::PowerLaw { p },
        })
    }

    /// A medium that does not expand: a(t) = a for all t.
    pub fn static_medium(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::domain(format!("scale factor must be positive, got {a}")));
        }
        Ok(Self {
            kind: HistoryKind::Static,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            repr: Repr::Static { a },
        })
    }

    /// A history given by a user function on the open interval `domain`.
    pub fn custom<F>(name: impl Into<String>, domain: (f64, f64), state: F) -> Self
    where
        F: Fn(f64) -> Result<HistoryState> + Send + Sync + 'static,
    {
        Self {
            kind: HistoryKind::Custom { name: name.into() },
            domain,
            repr: Repr::Custom(Arc::new(state)),
        }
    }

    /// ΛCDM (or the buoyancy-modified model) with time measured in 1/H₀.
    ///
    /// a(t) is integrated from ȧ = aH(a) over a ∈ [10⁻⁴, 10]. When matter
    /// or radiation is present t = 0 is the big bang; for a pure
    /// cosmological constant t = 0 is the epoch a = 1.
    pub fn lcdm(params: &CosmologyParams, modified: bool) -> Result<Self> {
        params.validate()?;
        let model = HubbleModel::from_params(params, 1.0, modified)?;
        Self::from_hubble_model(model, HistoryKind::LcdmNumeric { modified })
    }

    /// Integrates a(t) for an arbitrary power-law-sum Hubble model.
    pub fn from_hubble_model(model: HubbleModel, kind: HistoryKind) -> Result<Self> {
        let (a_min, a_max) = NUMERIC_A_RANGE;
        // H² must stay non-negative on the whole range.
        let n_probe = 200;
        for i in 0..=n_probe {
            let a = a_min * (a_max / a_min).powf(i as f64 / n_probe as f64);
            model.hubble_squared(a)?;
        }
        let rtol = crate::defaults::HISTORY_RTOL;
        // dt/d(ln a) = 1/H.
        let dt_dlna = |y: f64| 1.0 / model.hubble(y.exp()).unwrap_or(f64::NAN);
        let has_singularity = model.terms.iter().any(|&(c, n)| c > 0.0 && n > 0.0);
        let t_min = if has_singularity {
            let age = integrate(|a| 1.0 / (a * model.hubble(a).unwrap_or(f64::NAN)), 0.0, a_min, 1e-12)?;
            age.value
        } else {
            -integrate(dt_dlna, a_min.ln(), 0.0, 1e-12)?.value
        };
        let span = integrate(dt_dlna, a_min.ln(), a_max.ln(), 1e-12)?.value;
        let rhs = |_t: f64, y: f64| model.hubble(y.exp()).unwrap_or(f64::NAN);
        // Capping steps at a small fraction of an e-fold keeps the
        // derivative of the interpolant close to H.
        let cap = |_t: f64, y: f64| MAX_EFOLDS_PER_STEP / model.hubble(y.exp()).unwrap_or(f64::NAN);
        let sol = ode::solve(rhs, t_min, a_min.ln(), t_min + span, rtol, 1e-13, cap)?;
        Ok(Self {
            kind,
            domain: (sol.t_min(), sol.t_max()),
            repr: Repr::Numeric {
                model,
                sol: Arc::new(sol),
            },
        })
    }

    pub fn kind(&self) -> &HistoryKind {
        &self.kind
    }

    /// Closed time interval on which the history can be evaluated. For the
    /// power law the left end t = 0 is excluded.
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn state(&self, t: f64) -> Result<HistoryState> {
        if !t.is_finite() {
            return Err(Error::domain(format!("time must be finite, got {t}")));
        }
        match &self.repr {
            Repr::DeSitter { h, a0 } => Ok(HistoryState {
                a: a0 * (h * t).exp(),
                h: *h,
                h_dot: 0.0,
                h_ddot: 0.0,
            }),
            Repr::PowerLaw { p } => {
                if t <= 0.0 {
                    return Err(Error::domain(format!("power law needs t > 0, got {t}")));
                }
                Ok(HistoryState {
                    a: t.powf(*p),
                    h: p / t,
                    h_dot: -p / (t * t),
                    h_ddot: 2.0 * p / (t * t * t),
                })
            }
            Repr::Static { a } => Ok(HistoryState {
                a: *a,
                h: 0.0,
                h_dot: 0.0,
                h_ddot: 0.0,
            }),
            Repr::Numeric { model, sol } => {
                let y = sol.eval(t).ok_or_else(|| {
                    Error::domain(format!(
                        "t = {t} outside history domain [{}, {}]",
                        sol.t_min(),
                        sol.t_max()
                    ))
                })?;
                let a = y.exp();
                Ok(HistoryState {
                    a,
                    h: model.hubble(a)?,
                    h_dot: model.hubble_dot(a),
                    h_ddot: model.hubble_ddot(a)?,
                })
            }
            Repr::Custom(f) => {
                if !(t > self.domain.0 && t < self.domain.1) {
                    return Err(Error::domain(format!(
                        "t = {t} outside history domain ({}, {})",
                        self.domain.0, self.domain.1
                    )));
                }
                f(t)
            }
        }
    }

    pub fn a(&self, t: f64) -> Result<f64> {
        self.state(t).map(|s| s.a)
    }

    pub fn hubble(&self, t: f64) -> Result<f64> {
        self.state(t).map(|s| s.h)
    }

    /// The time at which the scale factor equals `a`, for monotonically
    /// expanding histories.
    pub fn time_at(&self, a: f64) -> Result<f64> {
        if !(a > 0.0) {
            return Err(Error::domain(format!("scale factor must be positive, got {a}")));
        }
        match &self.repr {
            Repr::DeSitter { h, a0 } => Ok((a / a0).ln() / h),
            Repr::PowerLaw { p } => Ok(a.powf(1.0 / p)),
            Repr::Numeric { sol, .. } => {
                let (lo, hi) = (sol.t_min(), sol.t_max());
                let target = a.ln();
                let r = crate::numerics::brent_root(|t| sol.eval(t).unwrap_or(f64::NAN) - target, lo, hi, 1e-15)?;
                Ok(r.root)
            }
            Repr::Static { .. } | Repr::Custom(_) => Err(Error::Model(format!(
                "time_at is not available for {:?} histories",
                self.kind
            ))),
        }
    }
}
