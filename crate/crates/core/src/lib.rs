//! Wendland compactly supported radial functions of arbitrary dimension and
//! (half-)integer smoothness, their equal-area rescaling towards the Gaussian,
//! radial Fourier transforms, convergence sweeps and an interpolation benchmark.

// `!(x > 0.0)` is used on purpose so that NaN fails validation; reference
// constants keep every digit they were published with.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod convergence;
pub mod error;
pub mod fourier;
pub mod interp;
pub mod output;
pub mod quadrature;
pub mod scaling;
pub mod special_fn;
pub mod wendland;

pub use convergence::{sup_error, sweep, SweepRecord};
pub use error::{Error, Result};
pub use fourier::{ft_phi, ft_psi, FourierSeriesSpec};
pub use scaling::{delta, gaussian, gaussian_ft, psi_eval, ScaledKernel};
pub use wendland::{
    phi_area, phi_eval, phi_poly_coeffs, phi_zero, WendlandFunction, WendlandParams,
};
