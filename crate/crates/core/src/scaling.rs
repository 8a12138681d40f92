//! Normalised equal-area Wendland functions and the Gaussian they approach.

use crate::error::{domain, Result};
use crate::special_fn::log_gamma_ratio_unchecked;
use crate::wendland::{phi_zero, WendlandFunction, WendlandParams};

/// Support radius delta_{l,k}(alpha) = (l + 2k + 1) Gamma(k + 1/2) / (2 sqrt(alpha) Gamma(k + 1)).
pub fn delta(ell: u32, k2: u32, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    let k = f64::from(k2) / 2.0;
    let ratio = log_gamma_ratio_unchecked(k + 1.0, -0.5).exp();
    Ok((f64::from(ell) + 2.0 * k + 1.0) * ratio / (2.0 * alpha.sqrt()))
}

/// psi_{l,k}: phi_{l,k} normalised to 1 at the origin and stretched to the
/// support [0, delta] so that its half-line integral equals that of exp(-alpha y^2).
#[derive(Debug, Clone)]
pub struct ScaledKernel {
    function: WendlandFunction,
    alpha: f64,
    delta: f64,
    norm_factor: f64,
}

impl ScaledKernel {
    pub fn new(params: WendlandParams, alpha: f64) -> Result<Self> {
        let delta = delta(params.ell(), params.k2(), alpha)?;
        Ok(Self {
            function: WendlandFunction::new(params),
            alpha,
            delta,
            norm_factor: 1.0 / phi_zero(params.ell(), params.k2()),
        })
    }

    pub fn params(&self) -> &WendlandParams {
        self.function.params()
    }

    pub fn function(&self) -> &WendlandFunction {
        &self.function
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// 1 / phi_{l,k}(0)
    pub fn norm_factor(&self) -> f64 {
        self.norm_factor
    }

    pub fn psi(&self, y: f64) -> f64 {
        if y >= self.delta {
            return 0.0;
        }
        self.function.normalized(y.max(0.0) / self.delta)
    }
}

pub fn psi_eval(kernel: &ScaledKernel, y: f64) -> f64 {
    kernel.psi(y)
}

/// exp(-alpha y^2)
pub fn gaussian(alpha: f64, y: f64) -> f64 {
    (-alpha * y * y).exp()
}

/// d-dimensional Fourier transform of the Gaussian: (2 alpha)^(-d/2) exp(-z^2 / (4 alpha)).
pub fn gaussian_ft(d: u32, alpha: f64, z: f64) -> f64 {
    (-(f64::from(d) / 2.0) * (2.0 * alpha).ln() - z * z / (4.0 * alpha)).exp()
}
