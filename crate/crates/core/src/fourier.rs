//! Radial Fourier transforms of phi_{l,k} and psi_{l,k}.
//!
//! F_d phi_{l,k}(z) = C_d^{l,k} 1F2((d+1)/2 + k; (l+d+1)/2 + k, (l+d+2)/2 + k; -z^2/4).
//! The transform of psi follows by the change of variable y = r delta.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::scaling::delta;
use crate::special_fn::{
    hyp_series_detailed, hyp_series_high_precision, log_gamma_unchecked, HypSeriesParams,
};
use crate::wendland::{phi_zero, WendlandParams};

/// Double-precision sums whose partial sums exceed this multiple of the
/// result are recomputed in fixed point.
pub const CANCELLATION_LIMIT: f64 = 1e6;

/// Results still above this ratio after the fallback are flagged.
pub const CANCELLATION_FLAG: f64 = 1e12;

/// Settings for evaluating the transforms of one Wendland function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierSeriesSpec {
    pub d: u32,
    pub params: WendlandParams,
    pub alpha: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl FourierSeriesSpec {
    /// Transform in dimension `params.d()`.
    pub fn new(params: WendlandParams, alpha: f64) -> Result<Self> {
        let spec = Self {
            d: params.d(),
            params,
            alpha,
            rel_tol: 1e-16,
            max_terms: 100_000,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tolerance(mut self, rel_tol: f64, max_terms: usize) -> Result<Self> {
        self.rel_tol = rel_tol;
        self.max_terms = max_terms;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms < 8 {
            return Err(Error::InvalidArgument(
                "rel_tol must be positive and max_terms >= 8".into(),
            ));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::Domain(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.d == 0 {
            return Err(Error::InvalidArgument(
                "dimension must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn k(&self) -> f64 {
        self.params.k()
    }

    fn ell(&self) -> f64 {
        f64::from(self.params.ell())
    }

    fn dim(&self) -> f64 {
        f64::from(self.d)
    }

    fn series_params(&self, z: f64) -> HypSeriesParams {
        let (d, l, k) = (self.dim(), self.ell(), self.k());
        HypSeriesParams::new(
            &[(d + 1.0) / 2.0 + k],
            &[(l + d + 1.0) / 2.0 + k, (l + d + 2.0) / 2.0 + k],
            -z * z / 4.0,
        )
        .with_tolerance(self.rel_tol, self.max_terms)
    }
}

fn ln_c_const(d: u32, ell: u32, k2: u32) -> f64 {
    let d = f64::from(d);
    let l = f64::from(ell);
    let k = f64::from(k2) / 2.0;
    (k + d / 2.0) * LN_2 + log_gamma_unchecked(l + 1.0) + log_gamma_unchecked((d + 1.0) / 2.0 + k)
        - 0.5 * PI.ln()
        - log_gamma_unchecked(l + d + 2.0 * k + 1.0)
}

/// C_d^{l,k} = 2^(k+d/2) Gamma(l+1) Gamma((d+1)/2+k) / (sqrt(pi) Gamma(l+d+2k+1)).
pub fn c_const(d: u32, ell: u32, k2: u32) -> f64 {
    ln_c_const(d, ell, k2).exp()
}

/// A transform value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue {
    pub value: f64,
    /// max |partial sum| / |sum| of the double-precision attempt.
    pub cancellation_ratio: f64,
    pub high_precision: bool,
}

impl TransformValue {
    /// True when the value came from a double-precision sum that lost more
    /// than twelve digits to cancellation.
    pub fn flagged(&self) -> bool {
        !self.high_precision && self.cancellation_ratio > CANCELLATION_FLAG
    }
}

/// The 1F2 factor of the transform, switching to fixed-point summation when
/// the double-precision sum cancels.
fn one_f_two(spec: &FourierSeriesSpec, z: f64) -> Result<TransformValue> {
    let params = spec.series_params(z);
    match hyp_series_detailed(&params) {
        Ok(sum) if sum.cancellation_ratio() <= CANCELLATION_LIMIT => Ok(TransformValue {
            value: sum.value,
            cancellation_ratio: sum.cancellation_ratio(),
            high_precision: false,
        }),
        first => {
            let cancellation_ratio = first
                .map(|s| s.cancellation_ratio())
                .unwrap_or(f64::INFINITY);
            let value = hyp_series_high_precision(
                &params.with_tolerance(spec.rel_tol, spec.max_terms.max(1_000_000)),
            )?;
            Ok(TransformValue {
                value,
                cancellation_ratio,
                high_precision: true,
            })
        }
    }
}

/// F_d phi_{l,k}(z) with evaluation diagnostics.
pub fn ft_phi_detailed(spec: &FourierSeriesSpec, z: f64) -> Result<TransformValue> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("z must be nonnegative, got {z}")));
    }
    let c = c_const(spec.d, spec.params.ell(), spec.params.k2());
    if z == 0.0 {
        return Ok(TransformValue {
            value: c,
            cancellation_ratio: 1.0,
            high_precision: false,
        });
    }
    let mut t = one_f_two(spec, z)?;
    t.value *= c;
    Ok(t)
}

/// F_d phi_{l,k}(z).
pub fn ft_phi(spec: &FourierSeriesSpec, z: f64) -> Result<f64> {
    ft_phi_detailed(spec, z).map(|t| t.value)
}

/// F_d psi_{l,k}(z) = delta^d phi(0)^(-1) F_d phi_{l,k}(delta z), with diagnostics.
pub fn ft_psi_detailed(spec: &FourierSeriesSpec, z: f64) -> Result<TransformValue> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("z must be nonnegative, got {z}")));
    }
    let (ell, k2) = (spec.params.ell(), spec.params.k2());
    let delta = delta(ell, k2, spec.alpha)?;
    let ln_scale = spec.dim() * delta.ln() - phi_zero(ell, k2).ln() + ln_c_const(spec.d, ell, k2);
    if z == 0.0 {
        return Ok(TransformValue {
            value: ln_scale.exp(),
            cancellation_ratio: 1.0,
            high_precision: false,
        });
    }
    let mut t = one_f_two(spec, delta * z)?;
    t.value *= ln_scale.exp();
    Ok(t)
}

/// F_d psi_{l,k}(z).
pub fn ft_psi(spec: &FourierSeriesSpec, z: f64) -> Result<f64> {
    ft_psi_detailed(spec, z).map(|t| t.value)
}

/// The explicit weighted power series of F_d psi_{l,k}:
/// `2^(-d/2) sum_n w_n(k) (-z^2/4)^n`, with the majorant
/// `U_n = (6/alpha)^(d/2+n) / n!` valid for k >= 1.
///
/// This is a second, independent route to [`ft_psi`], used for verification.
pub mod weighted_series {
    use super::*;

    /// ln w_n(k).
    pub fn ln_weight(spec: &FourierSeriesSpec, n: u32) -> Result<f64> {
        let (d, l, k) = (spec.dim(), spec.ell(), spec.k());
        let nf = f64::from(n);
        let delta = delta(spec.params.ell(), spec.params.k2(), spec.alpha)?;
        Ok(log_gamma_unchecked(d + 2.0 * k + 2.0 * nf)
            + log_gamma_unchecked(l + 2.0 * k + 1.0)
            + log_gamma_unchecked(k)
            - log_gamma_unchecked(2.0 * k)
            - log_gamma_unchecked(l + 2.0 * k + 1.0 + d + 2.0 * nf)
            - log_gamma_unchecked(k + d / 2.0 + nf)
            + (d + 2.0 * nf) * delta.ln()
            - log_gamma_unchecked(nf + 1.0))
    }

    /// ln U_n = (d/2 + n) ln(6/alpha) - ln n!.
    pub fn ln_majorant(spec: &FourierSeriesSpec, n: u32) -> f64 {
        let nf = f64::from(n);
        (spec.dim() / 2.0 + nf) * (6.0 / spec.alpha).ln() - log_gamma_unchecked(nf + 1.0)
    }

    /// sum_{m > n} U_m x^m for x = z^2/4.
    fn majorant_tail(spec: &FourierSeriesSpec, n: u32, x: f64) -> f64 {
        let y = 6.0 * x / spec.alpha;
        let prefactor = (spec.dim() / 2.0) * (6.0 / spec.alpha).ln();
        let mut m = n + 1;
        let mut term =
            (prefactor + f64::from(m) * y.ln() - log_gamma_unchecked(f64::from(m) + 1.0)).exp();
        let mut total = 0.0;
        loop {
            total += term;
            m += 1;
            let ratio = y / f64::from(m);
            term *= ratio;
            if ratio < 0.5 && term < 1e-18 * total {
                // geometric bound on what is left
                return total + term / (1.0 - ratio);
            }
            if m > n + 100_000 {
                return f64::INFINITY;
            }
        }
    }

    /// Result of summing the weighted series.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct WeightedSum {
        pub value: f64,
        pub terms: u32,
        /// True when truncation used the majorant tail bound (k >= 1).
        pub majorant_bounded: bool,
    }

    /// Sums the series until the current term plus the majorant tail is below
    /// `rel_tol` of the partial sum. For k < 1 no majorant is available and
    /// the sum stops after two consecutive negligible terms instead.
    pub fn ft_psi_series(spec: &FourierSeriesSpec, z: f64) -> Result<WeightedSum> {
        let x = z * z / 4.0;
        let use_majorant = spec.k() >= 1.0;
        let pre = -(spec.dim() / 2.0) * LN_2;
        let mut sum = 0.0;
        let mut comp = 0.0;
        let mut small_run = 0;
        for n in 0..spec.max_terms as u32 {
            let ln_mag =
                pre + ln_weight(spec, n)? + if n == 0 { 0.0 } else { f64::from(n) * x.ln() };
            let mag = ln_mag.exp();
            let term = if n.is_multiple_of(2) { mag } else { -mag };
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            let partial = sum + comp;
            if x == 0.0 {
                return Ok(WeightedSum {
                    value: partial,
                    terms: 1,
                    majorant_bounded: use_majorant,
                });
            }
            if use_majorant {
                let tail = (pre.exp()) * majorant_tail(spec, n, x);
                if mag + tail <= spec.rel_tol * partial.abs() {
                    return Ok(WeightedSum {
                        value: partial,
                        terms: n + 1,
                        majorant_bounded: true,
                    });
                }
            } else if mag <= spec.rel_tol * partial.abs() {
                small_run += 1;
                if small_run >= 2 {
                    return Ok(WeightedSum {
                        value: partial,
                        terms: n + 1,
                        majorant_bounded: false,
                    });
                }
            } else {
                small_run = 0;
            }
        }
        Err(Error::NonConvergence {
            terms: spec.max_terms,
            partial_sum: sum + comp,
        })
    }
}
