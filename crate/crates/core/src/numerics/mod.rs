//! Special functions, factorizations, quadrature and goodness-of-fit
//! statistics used by the analytic laws and the comparison harness.

mod bessel;
mod factor;
mod gof;
mod normal;
mod quad;

pub use bessel::{bessel_i0, bessel_i0_scaled};
pub use factor::{psd_factorize, PsdFactor};
pub use gof::{chi_square, ks_statistic, ChiSquare};
pub use normal::{std_normal_cdf, std_normal_pdf, GaussianMixture};
pub use quad::{quad_adaptive, Quadrature, UpperLimit};
