//! Numerical laboratory for moment integrals of the Riemann zeta function.
//!
//! The crate evaluates the classical second and fourth moments of zeta on and
//! off the critical line, partitions long ranges with reverse-iteration
//! sequences driven by the second-moment increment law, and composes the
//! moments into a family of normalized functionals whose finite-height
//! behavior can be tabulated, compared and extrapolated.
//!
//! Layering, bottom up:
//!
//! * [`special`] — scalar kernels: Hardy's Z, zeta on a vertical line,
//!   the Riemann–Siegel theta function, log-gamma, the divisor function.
//! * [`quadrature`] — oscillation-aware adaptive panel integration of
//!   `|Z|^p`-type integrands with error estimates.
//! * [`zeros`] — critical-line zero isolation, Gram points, and the
//!   argument functions S(t), S1(t).
//! * [`ladder`] — reverse-iteration sequences T < T^1 < ... < T^k defined by
//!   the increment relation for the second moment.
//! * [`functionals`] — the normalized functionals built from the above,
//!   coefficient fitting, and the exact-rational probe.
//! * [`chain`] — side-by-side evaluation of the whole equivalence family,
//!   plus distinctness experiments.
//!
//! All computations are deterministic for a fixed [`PrecisionPolicy`]:
//! parallel panel evaluation reduces in a fixed left-to-right order.

pub mod chain;
mod error;
pub mod fitting;
pub mod functionals;
mod gauss;
pub mod ladder;
mod policy;
pub mod quadrature;
mod roots;
pub mod special;
pub mod zeros;

pub use error::CoreError;
pub use policy::{Constants, PrecisionPolicy, TWO_PI_SQ};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
