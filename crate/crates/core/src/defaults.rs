//! Default physics inputs. Every value here can be overridden through
//! [`CosmologyParams`](crate::params::CosmologyParams), the config file, or
//! CLI flags.

/// Hubble constant in km/s/Mpc (CMB-inferred).
pub const H0_KM_S_MPC: f64 = 67.36;
/// Matter fraction.
pub const OMEGA_M: f64 = 0.3153;
/// Cosmological-constant fraction.
pub const OMEGA_L: f64 = 0.6847;
/// Radiation fraction. Neglected in the distance fits.
pub const OMEGA_R: f64 = 0.0;
/// Scale factor at last scattering used for distance integrals.
pub const A_STAR: f64 = 0.0;
/// Directly measured H|ₐ₌₁ / H₀.
pub const MEASURED_HUBBLE_RATIO: f64 = 1.084;
/// Number of modes in the noise synthesis.
pub const NOISE_MODES: usize = 64;
/// Default RNG seed.
pub const SEED: u64 = 20_240_601;
/// Relative tolerance of the adaptive ODE integration of a(t).
pub const HISTORY_RTOL: f64 = 1e-10;
/// Vacuum cutoff ℓ/ℓ_P used when no κ is given. Reproduces the measured
/// Hubble ratio above.
pub const CUTOFF_ELL_OVER_LP: f64 = 4.69;
