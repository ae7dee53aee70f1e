//! Causal renormalization: the truncated conformal-time series, the θ*
//! curve and its invariants, the transformed time w(θ), the renormalizer
//! correlation K₀ and the resulting energy densities.
//!
//! Units: histories carry their own time unit; lengths are in that unit
//! times c. Energy densities take an explicit [`Units`](crate::constants::Units).

pub mod curve;
pub mod energy;
pub mod transformed;
pub mod truncation;

pub use curve::{curve_invariants_numeric, schwarzian, AnalyticCurve, CurveInvariants};
pub use energy::{
    anomaly_conservation_residual, anomaly_density, bare_energy_density, critical_energy_row,
    renormalizer_energy_density, timelike_limit_energy, vacuum_energy_density, CriticalEnergyRow, EnergyReport,
};
pub use transformed::{
    delta_coefficient, k0, renormalizer_correlation, renormalizer_correlation_with_c, theta_of_w, w_of_theta, w_prime,
    w_prime_series, w_series,
};
pub use truncation::{
    eta_parameter, theta_star_curve, truncated_tau, truncated_tau_exact, ThetaStarCurve, TruncatedTau,
};
