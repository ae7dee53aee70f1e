//! Numerical kernel: quadrature, principal values, root finding, ₂F₁,
//! finite differences, Taylor jets, an ODE integrator and a seeded RNG.

pub mod diff;
pub mod hyp;
pub mod jet;
pub mod ode;
pub mod pv;
pub mod quad;
pub mod rng;
pub mod roots;

pub use diff::{fd_derivative, fornberg_weights, one_sided_derivatives, Side};
pub use hyp::hyp2f1;
pub use jet::{Jet2, Real};
pub use pv::{principal_value, principal_value_with};
pub use quad::{integrate, integrate_with, EndpointHint, QuadOptions, QuadratureResult};
pub use rng::{gaussian_rng, ComplexGaussianStream};
pub use roots::{brent_root, RootResult};
