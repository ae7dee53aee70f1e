//! Vacuum correlations, causal renormalization and quantum buoyancy in an
//! expanding, spatially flat universe.
//!
//! - [`history`]: scale-factor models a(t) with H, Ḣ and Ḧ.
//! - [`correlation`]: vacuum, de Sitter and thermal correlation functions.
//! - [`renorm`]: truncated conformal time, the renormalizer correlation and
//!   the renormalized vacuum and anomaly energies.
//! - [`expansion`], [`distance`]: the buoyancy-modified Friedmann model, the
//!   conformal distance and the fit of the vacuum coupling to a Hubble ratio.
//! - [`noise`]: Gaussian vacuum noise on (t, x) grids.
//! - [`numerics`]: quadrature, principal values, root finding, ODEs and
//!   special functions used by the above.
//!
//! The guide in `book/` walks through each part; its code blocks run as
//! doctests of this crate.
//!
//! ```
//! use cosmic_vacuum::distance::hubble_ratio;
//! use cosmic_vacuum::params::CosmologyParams;
//!
//! let r = hubble_ratio(&CosmologyParams::planck(), 0.0128).unwrap();
//! assert!((r - 1.084).abs() < 0.002);
//! ```

// `!(x > 0.0)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod correlation;
pub mod defaults;
pub mod distance;
pub mod error;
pub mod expansion;
pub mod history;
pub mod noise;
pub mod numerics;
pub mod params;
pub mod renorm;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/histories.md")]
    mod histories {}
    #[doc = include_str!("../../../book/src/correlations.md")]
    mod correlations {}
    #[doc = include_str!("../../../book/src/renormalization.md")]
    mod renormalization {}
    #[doc = include_str!("../../../book/src/tension.md")]
    mod tension {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
