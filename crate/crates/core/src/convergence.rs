//! Distance between psi_{l,k} and its Gaussian limit: E(y) = psi(y) - exp(-alpha y^2)
//! and its sup norm over y >= 0.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scaling::{gaussian, ScaledKernel};
use crate::wendland::WendlandParams;

/// Beyond sqrt(36/alpha) the Gaussian is below 1e-15.
const GAUSSIAN_TAIL: f64 = 36.0;
const REFINEMENT_REL_TOL: f64 = 1e-6;
const MAX_DOUBLINGS: usize = 10;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

pub fn error_fn(kernel: &ScaledKernel, y: f64) -> f64 {
    kernel.psi(y) - gaussian(kernel.alpha(), y)
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub d: u32,
    pub k2: u32,
    pub ell: u32,
    pub alpha: f64,
    /// Estimate of sup_y |E(y)|.
    pub epsilon: f64,
    pub argmax_y: f64,
    /// Coarse grid size of the final refinement pass.
    pub grid_points: usize,
    /// Set when the computation for this k failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl SweepRecord {
    pub fn k(&self) -> f64 {
        f64::from(self.k2) / 2.0
    }

    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }
}

fn search_limit(kernel: &ScaledKernel) -> f64 {
    kernel.delta().max((GAUSSIAN_TAIL / kernel.alpha()).sqrt())
}

/// Maximises |E| on [a, b] by golden-section search.
fn golden_max(kernel: &ScaledKernel, mut a: f64, mut b: f64) -> (f64, f64) {
    let f = |y: f64| error_fn(kernel, y).abs();
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a) <= 1e-13 * b.abs().max(1e-300) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let (fa, fb) = (f(a), f(b));
    [(fc, c), (fd, d), (fa, a), (fb, b)]
        .into_iter()
        .fold((f64::NEG_INFINITY, a), |best, (v, y)| {
            if v > best.0 {
                (v, y)
            } else {
                best
            }
        })
}

/// Coarse scan plus golden-section refinement of every local maximum of |E|.
fn estimate(kernel: &ScaledKernel, n: usize) -> (f64, f64) {
    let limit = search_limit(kernel);
    let delta = kernel.delta();
    let h = limit / (n - 1) as f64;
    let ys: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { limit } else { i as f64 * h })
        .collect();
    let vals: Vec<f64> = ys.iter().map(|&y| error_fn(kernel, y).abs()).collect();

    let mut best = (vals[0], ys[0]);
    for i in 0..n {
        let left = if i == 0 {
            f64::NEG_INFINITY
        } else {
            vals[i - 1]
        };
        let right = if i + 1 == n {
            f64::NEG_INFINITY
        } else {
            vals[i + 1]
        };
        if vals[i] > best.0 {
            best = (vals[i], ys[i]);
        }
        if !(vals[i] >= left && vals[i] >= right) {
            continue;
        }
        let a = ys[i.saturating_sub(1)];
        let b = ys[(i + 1).min(n - 1)];
        // |E| equals the decreasing Gaussian beyond delta, so refine only up to it
        let candidates = if a < delta && delta < b {
            vec![
                golden_max(kernel, a, delta),
                (error_fn(kernel, delta).abs(), delta),
            ]
        } else if a >= delta {
            vec![(vals[i], ys[i])]
        } else {
            vec![golden_max(kernel, a, b)]
        };
        for c in candidates {
            if c.0 > best.0 {
                best = c;
            }
        }
    }
    best
}

/// Sup-norm estimate of E for one kernel. The coarse grid is doubled until
/// two successive estimates agree to 1e-6 relative.
pub fn sup_error(kernel: &ScaledKernel, coarse_n: usize) -> Result<SweepRecord> {
    if coarse_n < 64 {
        return Err(Error::InvalidArgument(format!(
            "coarse grid needs at least 64 points, got {coarse_n}"
        )));
    }
    let mut n = coarse_n;
    let mut prev = estimate(kernel, n);
    let mut converged = false;
    for _ in 0..MAX_DOUBLINGS {
        let next_n = 2 * n;
        let next = estimate(kernel, next_n);
        let change = (next.0 - prev.0).abs();
        n = next_n;
        let done = change <= REFINEMENT_REL_TOL * next.0.abs();
        // never let a finer grid lower the estimate
        prev = if next.0 >= prev.0 { next } else { prev };
        if done {
            converged = true;
            break;
        }
    }
    let params = kernel.params();
    if !prev.0.is_finite() {
        return Err(Error::NonConvergence {
            terms: n,
            partial_sum: prev.0,
        });
    }
    Ok(SweepRecord {
        d: params.d(),
        k2: params.k2(),
        ell: params.ell(),
        alpha: kernel.alpha(),
        epsilon: prev.0,
        argmax_y: prev.1,
        grid_points: n,
        failure: (!converged).then(|| "grid refinement did not settle".to_string()),
    })
}

/// sup_error for every k2 in the list, computed in parallel and returned in
/// ascending k2 order. A failing entry is reported in its record, not raised.
pub fn sweep(d: u32, k2_list: &[u32], alpha: f64, coarse_n: usize) -> Result<Vec<SweepRecord>> {
    if k2_list.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one k".into()));
    }
    let mut k2s = k2_list.to_vec();
    k2s.sort_unstable();
    k2s.dedup();
    Ok(k2s
        .par_iter()
        .map(|&k2| {
            let run = || -> Result<SweepRecord> {
                let params = WendlandParams::new(d, k2)?;
                sup_error(&ScaledKernel::new(params, alpha)?, coarse_n)
            };
            run().unwrap_or_else(|e| SweepRecord {
                d,
                k2,
                ell: crate::wendland::derive_ell(d, k2),
                alpha,
                epsilon: f64::NAN,
                argmax_y: f64::NAN,
                grid_points: 0,
                failure: Some(e.to_string()),
            })
        })
        .collect())
}
