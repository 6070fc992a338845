//! Scalar special functions consumed by the moment integrands: Hardy's Z,
//! zeta on a vertical line, the Riemann-Siegel theta function, log-gamma and
//! the divisor function.

mod divisor;
mod gamma;
mod hardy;
mod theta;
mod zeta;

pub use divisor::{divisor_count, divisor_sum_range};
pub use gamma::{ln_gamma, ln_gamma_complex};
pub use hardy::hardy_z;
pub use theta::rs_theta;
pub use zeta::zeta_on_sigma;

pub(crate) use zeta::{em_truncation, zeta_em, DirichletTables};
