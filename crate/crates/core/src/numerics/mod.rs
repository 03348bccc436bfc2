//! Numerical kernels shared by every other module: adaptive quadrature,
//! CDF inversion, Hermite functions and asymptotic fits.

pub mod fit;
pub mod hermite;
pub mod invert;
pub mod quadrature;
pub mod special;

pub use fit::{fit_log_linear, fit_power_law, FitModel, FitResult};
pub use hermite::{
    hermite_cdf, hermite_psi, hermite_psi_all, hermite_psi_pair, hermite_zeros, ln_abs_hermite_psi,
};
pub use invert::{invert_cdf, invert_monotone};
pub use quadrature::{integrate_adaptive, Interval, QuadEstimate, Quadrature, QuadratureConfig};
