//! Scattered-data interpolation with Wendland and Gaussian kernels on a
//! square, reproducing the Franke-function benchmark: matrix assembly,
//! Cholesky solve, L2/Linf errors and the extreme eigenvalues.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scaling::{gaussian, ScaledKernel};
use crate::wendland::{format_k, WendlandFunction, WendlandParams};

pub use crate::quadrature::gauss_legendre_nodes;

pub type Point = [f64; 2];

/// Franke's bivariate test function on the unit square, in the form given in
/// Franke's 1979 report (the second bump uses `(9y + 1) / 10`, not its square).
pub fn franke(x: f64, y: f64) -> f64 {
    let (x9, y9) = (9.0 * x, 9.0 * y);
    0.75 * (-((x9 - 2.0).powi(2) + (y9 - 2.0).powi(2)) / 4.0).exp()
        + 0.75 * (-(x9 + 1.0).powi(2) / 49.0 - (y9 + 1.0) / 10.0).exp()
        + 0.5 * (-((x9 - 7.0).powi(2) + (y9 - 3.0).powi(2)) / 4.0).exp()
        - 0.2 * (-(x9 - 4.0).powi(2) - (y9 - 7.0).powi(2)).exp()
}

/// How the unit-square Franke function is placed on [0, L]^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrankeConvention {
    /// franke(x / L, y / L)
    Scaled,
    /// franke(x, y), the convention that reproduces the published benchmark
    #[default]
    Direct,
}

/// Function sampled at the centres and compared against in the error norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Target {
    Franke(FrankeConvention),
    Zero,
}

impl Target {
    pub fn eval(&self, p: Point, domain_length: f64) -> f64 {
        match self {
            Target::Franke(FrankeConvention::Scaled) => {
                franke(p[0] / domain_length, p[1] / domain_length)
            }
            Target::Franke(FrankeConvention::Direct) => franke(p[0], p[1]),
            Target::Zero => 0.0,
        }
    }
}

/// Radial kernel choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum KernelSpec {
    /// phi_{l,k}(r) / phi_{l,k}(0), support radius 1
    NormalizedWendland { d: u32, k2: u32 },
    /// psi_{l,k}(r), support radius delta_{l,k}(alpha)
    EqualAreaWendland { d: u32, k2: u32, alpha: f64 },
    /// exp(-alpha r^2)
    Gaussian { alpha: f64 },
}

impl KernelSpec {
    pub fn short_name(&self) -> &'static str {
        match self {
            KernelSpec::NormalizedWendland { .. } => "phi",
            KernelSpec::EqualAreaWendland { .. } => "psi",
            KernelSpec::Gaussian { .. } => "gauss",
        }
    }

    /// "1".."5" style smoothness label, "inf" for the Gaussian.
    pub fn k_label(&self) -> String {
        match self {
            KernelSpec::NormalizedWendland { k2, .. }
            | KernelSpec::EqualAreaWendland { k2, .. } => format_k(*k2),
            KernelSpec::Gaussian { .. } => "inf".to_string(),
        }
    }

    pub fn profile(&self) -> Result<RadialProfile> {
        Ok(match *self {
            KernelSpec::NormalizedWendland { d, k2 } => {
                RadialProfile::Normalized(WendlandFunction::new(WendlandParams::new(d, k2)?))
            }
            KernelSpec::EqualAreaWendland { d, k2, alpha } => {
                RadialProfile::EqualArea(ScaledKernel::new(WendlandParams::new(d, k2)?, alpha)?)
            }
            KernelSpec::Gaussian { alpha } => {
                if !(alpha > 0.0) {
                    return Err(Error::Domain(format!(
                        "alpha must be positive, got {alpha}"
                    )));
                }
                RadialProfile::Gaussian { alpha }
            }
        })
    }
}

/// Evaluator for a kernel's radial profile; every variant equals 1 at r = 0.
#[derive(Debug, Clone)]
pub enum RadialProfile {
    Normalized(WendlandFunction),
    EqualArea(ScaledKernel),
    Gaussian { alpha: f64 },
}

impl RadialProfile {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Normalized(f) => f.normalized(r),
            RadialProfile::EqualArea(k) => k.psi(r),
            RadialProfile::Gaussian { alpha } => gaussian(*alpha, r),
        }
    }

    /// Radius beyond which the profile vanishes identically.
    pub fn support(&self) -> f64 {
        match self {
            RadialProfile::Normalized(_) => 1.0,
            RadialProfile::EqualArea(k) => k.delta(),
            RadialProfile::Gaussian { .. } => f64::INFINITY,
        }
    }
}

fn distance(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// grid x grid equally spaced centres on [0, L]^2, endpoints included,
/// row-major with x varying fastest.
pub fn build_centers(grid: usize, domain_length: f64) -> Result<Vec<Point>> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid must be at least 2, got {grid}"
        )));
    }
    if !(domain_length > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "domain length must be positive, got {domain_length}"
        )));
    }
    let coord = |i: usize| domain_length * i as f64 / (grid - 1) as f64;
    Ok((0..grid)
        .flat_map(|i| (0..grid).map(move |j| [coord(j), coord(i)]))
        .collect())
}

/// Centres, samples and kernel of one interpolation problem on [0, L]^2.
#[derive(Debug, Clone)]
pub struct InterpolationProblem {
    centers: Vec<Point>,
    values: Vec<f64>,
    kernel: KernelSpec,
    target: Target,
    domain_length: f64,
    profile: RadialProfile,
}

impl InterpolationProblem {
    /// Samples `target` at the centres.
    pub fn new(
        centers: Vec<Point>,
        kernel: KernelSpec,
        target: Target,
        domain_length: f64,
    ) -> Result<Self> {
        let values = centers
            .iter()
            .map(|&p| target.eval(p, domain_length))
            .collect();
        Self::with_values(centers, values, kernel, target, domain_length)
    }

    pub fn with_values(
        centers: Vec<Point>,
        values: Vec<f64>,
        kernel: KernelSpec,
        target: Target,
        domain_length: f64,
    ) -> Result<Self> {
        if centers.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "{} centres but {} values",
                centers.len(),
                values.len()
            )));
        }
        if centers.is_empty() {
            return Err(Error::InvalidArgument("no centres".into()));
        }
        for i in 0..centers.len() {
            for j in 0..i {
                if centers[i] == centers[j] {
                    return Err(Error::DuplicateCenter {
                        first: j,
                        second: i,
                    });
                }
            }
        }
        let profile = kernel.profile()?;
        Ok(Self {
            centers,
            values,
            kernel,
            target,
            domain_length,
            profile,
        })
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// A[i][j] = profile(|x_i - x_j|).
pub fn assemble_matrix(problem: &InterpolationProblem) -> DMatrix<f64> {
    let n = problem.len();
    let c = &problem.centers;
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = problem.profile.eval(0.0);
        for j in 0..i {
            let v = problem.profile.eval(distance(c[i], c[j]));
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Coefficients c with A c = values, via Cholesky.
pub fn solve_interpolant(problem: &InterpolationProblem) -> Result<Vec<f64>> {
    let a = assemble_matrix(problem);
    let chol = a.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let rhs = DVector::from_column_slice(&problem.values);
    Ok(chol.solve(&rhs).iter().copied().collect())
}

/// sum_i c_i profile(|point - x_i|)
pub fn eval_interpolant(problem: &InterpolationProblem, coefficients: &[f64], point: Point) -> f64 {
    let support = problem.profile.support();
    problem
        .centers
        .iter()
        .zip(coefficients)
        .filter_map(|(&x, &c)| {
            let r = distance(point, x);
            (r < support).then(|| c * problem.profile.eval(r))
        })
        .sum()
}

fn pointwise_errors(problem: &InterpolationProblem, coefficients: &[f64], xs: &[f64]) -> Vec<f64> {
    let m = xs.len();
    (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let p = [xs[idx % m], xs[idx / m]];
            eval_interpolant(problem, coefficients, p)
                - problem.target.eval(p, problem.domain_length)
        })
        .collect()
}

pub const L2_NODES: usize = 120;
pub const LINF_POINTS: usize = 360;

/// sqrt of the tensor Gauss–Legendre estimate of the integral of (I - f)^2.
pub fn l2_error_with(problem: &InterpolationProblem, coefficients: &[f64], nodes: usize) -> f64 {
    let (xs, ws) = GaussLegendre::new(nodes).on_interval(0.0, problem.domain_length);
    let errs = pointwise_errors(problem, coefficients, &xs);
    let m = xs.len();
    errs.iter()
        .enumerate()
        .map(|(idx, e)| ws[idx % m] * ws[idx / m] * e * e)
        .sum::<f64>()
        .sqrt()
}

pub fn l2_error(problem: &InterpolationProblem, coefficients: &[f64]) -> f64 {
    l2_error_with(problem, coefficients, L2_NODES)
}

/// max |I - f| over an equally spaced grid including the domain edges.
pub fn linf_error_with(problem: &InterpolationProblem, coefficients: &[f64], points: usize) -> f64 {
    let xs: Vec<f64> = (0..points)
        .map(|i| problem.domain_length * i as f64 / (points - 1) as f64)
        .collect();
    pointwise_errors(problem, coefficients, &xs)
        .into_iter()
        .fold(0.0, |acc, e| acc.max(e.abs()))
}

pub fn linf_error(problem: &InterpolationProblem, coefficients: &[f64]) -> f64 {
    linf_error_with(problem, coefficients, LINF_POINTS)
}

/// Extreme eigenvalues and 2-norm condition number of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spectrum {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub cond_2: f64,
}

pub fn spectrum(matrix: &DMatrix<f64>) -> Result<Spectrum> {
    if !matrix.is_square() || matrix.nrows() == 0 {
        return Err(Error::InvalidArgument(
            "spectrum needs a nonempty square matrix".into(),
        ));
    }
    let eig = matrix.clone().symmetric_eigen();
    let (lambda_min, lambda_max) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !lambda_min.is_finite() || !lambda_max.is_finite() {
        return Err(Error::NonConvergence {
            terms: 0,
            partial_sum: f64::NAN,
        });
    }
    Ok(Spectrum {
        lambda_min,
        lambda_max,
        cond_2: lambda_max / lambda_min,
    })
}

/// One line of the benchmark table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub kernel: String,
    pub n: usize,
    pub k_label: String,
    pub l2_error: f64,
    pub linf_error: f64,
    pub cond_2: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Which kernels to include in an experiment run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    Phi,
    Psi,
    Gauss,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub grid: usize,
    pub domain_length: f64,
    pub alpha: f64,
    pub d: u32,
    pub k2_values: Vec<u32>,
    pub families: Vec<KernelFamily>,
    pub convention: FrankeConvention,
}

impl Default for ExperimentConfig {
    /// 9 x 9 centres on [0, 5]^2, alpha = 2, k = 1..5 for phi and psi plus the Gaussian.
    fn default() -> Self {
        Self {
            grid: 9,
            domain_length: 5.0,
            alpha: 2.0,
            d: 2,
            k2_values: (1..=5).map(|k| 2 * k).collect(),
            families: vec![KernelFamily::Phi, KernelFamily::Psi, KernelFamily::Gauss],
            convention: FrankeConvention::Direct,
        }
    }
}

impl ExperimentConfig {
    pub fn kernels(&self) -> Vec<KernelSpec> {
        let mut out = Vec::new();
        for family in &self.families {
            match family {
                KernelFamily::Phi => out.extend(
                    self.k2_values
                        .iter()
                        .map(|&k2| KernelSpec::NormalizedWendland { d: self.d, k2 }),
                ),
                KernelFamily::Psi => {
                    out.extend(
                        self.k2_values
                            .iter()
                            .map(|&k2| KernelSpec::EqualAreaWendland {
                                d: self.d,
                                k2,
                                alpha: self.alpha,
                            }),
                    )
                }
                KernelFamily::Gauss => out.push(KernelSpec::Gaussian { alpha: self.alpha }),
            }
        }
        out
    }
}

/// Solves, measures and summarises one kernel.
pub fn run_kernel(config: &ExperimentConfig, kernel: KernelSpec) -> Result<ExperimentRow> {
    let centers = build_centers(config.grid, config.domain_length)?;
    let problem = InterpolationProblem::new(
        centers,
        kernel,
        Target::Franke(config.convention),
        config.domain_length,
    )?;
    let coefficients = solve_interpolant(&problem)?;
    let spec = spectrum(&assemble_matrix(&problem))?;
    Ok(ExperimentRow {
        kernel: kernel.short_name().to_string(),
        n: problem.len(),
        k_label: kernel.k_label(),
        l2_error: l2_error(&problem, &coefficients),
        linf_error: linf_error(&problem, &coefficients),
        cond_2: spec.cond_2,
        lambda_min: spec.lambda_min,
        lambda_max: spec.lambda_max,
    })
}

/// Every configured row, in kernel order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    config
        .kernels()
        .into_par_iter()
        .map(|kernel| run_kernel(config, kernel))
        .collect()
}
