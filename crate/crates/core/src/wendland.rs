//! Wendland functions phi_{l,k} for integer ("original") and half-integer
//! ("missing") smoothness.
//!
//! The smoothness is carried as `k2 = 2k` so the original/missing split is an
//! exact parity test. Three independent evaluation routes exist:
//!
//! * integer k: exact rational polynomial, evaluated in the factored form
//!   `(1 - r)^(l + k) p(r)` so that no cancellation occurs even at k = 50;
//! * any k: Gauss–Legendre quadrature of the integral definition after the
//!   substitution `s^2 = r^2 + (1 - r^2) u^2`, which removes the endpoint
//!   singularity of `(s^2 - r^2)^(k - 1)`;
//! * any k: the Gauss hypergeometric representation in `1 - r^2`, kept as a
//!   cross-check for r away from zero.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::quadrature::doubling_rule;
use crate::special_fn::{hyp_series, log_gamma_unchecked, HypSeriesParams};

/// Spatial dimension and doubled smoothness, plus the derived exponent l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WendlandParams {
    d: u32,
    k2: u32,
    ell: u32,
}

/// l = floor(d/2 + k) + 1 with k = k2/2, in exact integer arithmetic.
pub fn derive_ell(d: u32, k2: u32) -> u32 {
    (d + k2) / 2 + 1
}

impl WendlandParams {
    pub fn new(d: u32, k2: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "dimension must be at least 1".into(),
            ));
        }
        if k2 == 0 {
            return Err(Error::InvalidArgument(
                "smoothness 2k must be at least 1".into(),
            ));
        }
        Ok(Self {
            d,
            k2,
            ell: derive_ell(d, k2),
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k2(&self) -> u32 {
        self.k2
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn k(&self) -> f64 {
        f64::from(self.k2) / 2.0
    }

    /// True for the original (integer k) functions.
    pub fn is_original(&self) -> bool {
        self.k2.is_multiple_of(2)
    }
}

impl std::fmt::Display for WendlandParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "d={} k={} l={}", self.d, format_k(self.k2), self.ell)
    }
}

/// k = k2/2 as a decimal string ("3", "2.5").
pub fn format_k(k2: u32) -> String {
    if k2.is_multiple_of(2) {
        format!("{}", k2 / 2)
    } else {
        format!("{}.5", k2 / 2)
    }
}

/// Polynomial with exact rational coefficients; index i holds the r^i coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coefficients: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(coefficients: Vec<BigRational>) -> Self {
        let mut p = Self { coefficients };
        p.trim();
        p
    }

    pub fn from_integers(coefficients: &[i64]) -> Self {
        Self::new(
            coefficients
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(Zero::is_zero) {
            self.coefficients.pop();
        }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out =
            vec![BigRational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// (1 - r)^power
    pub fn one_minus_r_pow(power: u32) -> Self {
        let coefficients = (0..=power)
            .map(|i| {
                let c = BigRational::from_integer(binomial(power, i));
                if i.is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .collect();
        Self::new(coefficients)
    }

    /// Exact quotient by (1 - r)^power; errors if the division leaves a remainder.
    pub fn divide_by_one_minus_r(&self, power: u32) -> Result<Self> {
        let mut current = self.coefficients.clone();
        for _ in 0..power {
            if current.is_empty() {
                break;
            }
            // synthetic division by (r - 1)
            let n = current.len();
            let mut quotient = vec![BigRational::zero(); n - 1];
            let mut carry = BigRational::zero();
            for i in (0..n).rev() {
                let v = &current[i] + &carry;
                if i == 0 {
                    if !v.is_zero() {
                        return Err(Error::Unsupported(
                            "polynomial is not divisible by (1 - r)".into(),
                        ));
                    }
                } else {
                    quotient[i - 1] = v.clone();
                    carry = v;
                }
            }
            current = quotient.into_iter().map(|c| -c).collect();
        }
        Ok(Self::new(current))
    }

    /// If `self = c * other` for a single positive rational c, returns c.
    pub fn positive_ratio_to(&self, other: &Self) -> Option<BigRational> {
        if self.coefficients.len() != other.coefficients.len() || self.is_zero() {
            return None;
        }
        let ratio = self.coefficients.last()? / other.coefficients.last()?;
        if !ratio.is_positive() {
            return None;
        }
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .all(|(a, b)| *a == b * &ratio)
            .then_some(ratio)
    }

    pub fn eval_rational(&self, r: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * r + c)
    }

    pub fn to_f64_coefficients(&self) -> Vec<f64> {
        self.coefficients.iter().map(rational_to_f64).collect()
    }

    /// Coefficients as lowest-terms "numerator/denominator" strings.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coefficients
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    if let Some(v) = c.to_f64() {
        if v.is_finite() && (v != 0.0 || c.is_zero()) {
            return v;
        }
    }
    // fall back to scaling by powers of two for extreme magnitudes
    let n = c.numer();
    let d = c.denom();
    let shift = n.bits() as i64 - d.bits() as i64 - 60;
    let scaled = if shift >= 0 {
        BigRational::new(n.clone(), d << shift as usize)
    } else {
        BigRational::new(n << (-shift) as usize, d.clone())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact coefficients of phi_{l,k} on [0, 1] for integer k.
///
/// Expands `(1 - s)^l` and `(s^2 - r^2)^(k-1)` binomially and integrates each
/// monomial `s^(1+i+2j)` over [r, 1].
pub fn phi_poly_coeffs(params: &WendlandParams) -> Result<RationalPolynomial> {
    if !params.is_original() {
        return Err(Error::Unsupported(format!(
            "exact polynomial form needs integer k, got k={}",
            format_k(params.k2)
        )));
    }
    let ell = params.ell;
    let k = params.k2 / 2;
    let km1 = k - 1;
    let degree = (2 * k + ell) as usize;
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for j in 0..=km1 {
        // (s^2 - r^2)^(k-1) term: C(k-1, j) s^{2j} (-1)^{k-1-j} r^{2(k-1-j)}
        let cj = binomial(km1, j);
        let sign_j = if (km1 - j).is_multiple_of(2) { 1 } else { -1 };
        let r_pow = (2 * (km1 - j)) as usize;
        for i in 0..=ell {
            let ci = binomial(ell, i);
            let sign_i = if i.is_multiple_of(2) { 1 } else { -1 };
            let denom = BigInt::from(2 + i + 2 * j);
            let c = BigRational::new(&ci * &cj * BigInt::from(sign_i * sign_j), denom);
            // integral over [r, 1] of s^{1+i+2j} = (1 - r^{2+i+2j}) / (2+i+2j)
            coeffs[r_pow] += &c;
            coeffs[r_pow + (2 + i + 2 * j) as usize] -= &c;
        }
    }
    // 1 / (Gamma(k) 2^{k-1})
    let norm = BigRational::new(BigInt::one(), factorial(km1) << km1 as usize);
    Ok(RationalPolynomial::new(
        coeffs.into_iter().map(|c| c * &norm).collect(),
    ))
}

fn ln_phi_zero(ell: u32, k2: u32) -> f64 {
    let l = f64::from(ell);
    let k = f64::from(k2) / 2.0;
    log_gamma_unchecked(l + 1.0) + log_gamma_unchecked(2.0 * k)
        - (k - 1.0) * std::f64::consts::LN_2
        - log_gamma_unchecked(k)
        - log_gamma_unchecked(l + 2.0 * k + 1.0)
}

/// phi_{l,k}(0) = Gamma(l+1) Gamma(2k) / (2^(k-1) Gamma(k) Gamma(l+2k+1)).
pub fn phi_zero(ell: u32, k2: u32) -> f64 {
    ln_phi_zero(ell, k2).exp()
}

/// Integral of phi_{l,k} over [0, inf): 2^k Gamma(l+1) Gamma(k+1) / Gamma(l+2k+2).
pub fn phi_area(ell: u32, k2: u32) -> f64 {
    let l = f64::from(ell);
    let k = f64::from(k2) / 2.0;
    (k * std::f64::consts::LN_2 + log_gamma_unchecked(l + 1.0) + log_gamma_unchecked(k + 1.0)
        - log_gamma_unchecked(l + 2.0 * k + 2.0))
    .exp()
}

#[derive(Debug, Clone)]
enum Evaluator {
    /// phi / phi(0) = (1 - r)^power * sum coeffs[i] r^i, coeffs[0] = 1
    Factored { power: i32, coeffs: Vec<f64> },
    /// phi / phi(0) = (1 - r^2)^k I(r) / B(2k, l+1)
    Quadrature { ln_beta: f64 },
}

/// Precomputed evaluator for one Wendland function.
#[derive(Debug, Clone)]
pub struct WendlandFunction {
    params: WendlandParams,
    phi_zero: f64,
    evaluator: Evaluator,
}

const QUADRATURE_REL_TOL: f64 = 1e-12;

impl WendlandFunction {
    pub fn new(params: WendlandParams) -> Self {
        let evaluator = if params.is_original() {
            let poly = phi_poly_coeffs(&params).expect("integer k");
            let power = params.ell + params.k2 / 2;
            let quotient = poly
                .divide_by_one_minus_r(power)
                .expect("phi_{l,k} carries the factor (1 - r)^(l + k)");
            let c0 = quotient.coefficients()[0].clone();
            let coeffs = quotient
                .coefficients()
                .iter()
                .map(|c| rational_to_f64(&(c / &c0)))
                .collect();
            Evaluator::Factored {
                power: power as i32,
                coeffs,
            }
        } else {
            let l = f64::from(params.ell);
            let k = params.k();
            let ln_beta = log_gamma_unchecked(2.0 * k) + log_gamma_unchecked(l + 1.0)
                - log_gamma_unchecked(l + 2.0 * k + 1.0);
            Evaluator::Quadrature { ln_beta }
        };
        Self {
            params,
            phi_zero: phi_zero(params.ell, params.k2),
            evaluator,
        }
    }

    pub fn params(&self) -> &WendlandParams {
        &self.params
    }

    pub fn phi_zero(&self) -> f64 {
        self.phi_zero
    }

    /// phi(r) / phi(0); 1 at the origin, 0 for r >= 1.
    pub fn normalized(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 1.0;
        }
        if r >= 1.0 {
            return 0.0;
        }
        match &self.evaluator {
            Evaluator::Factored { power, coeffs } => {
                let p = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c);
                (1.0 - r).powi(*power) * p
            }
            Evaluator::Quadrature { ln_beta } => {
                let k = self.params.k();
                let one_minus_r2 = (1.0 - r) * (1.0 + r);
                let integral = substituted_integral(self.params.ell, self.params.k2, r);
                (k * one_minus_r2.ln() + integral.ln() - ln_beta).exp()
            }
        }
    }

    /// phi_{l,k}(r) itself.
    pub fn eval(&self, r: f64) -> f64 {
        self.phi_zero * self.normalized(r)
    }
}

/// I(r) = int_0^1 u^(2k-1) (1 - s(u))^l du with s(u)^2 = r^2 + (1 - r^2) u^2.
///
/// The integrand has complex singularities at u = +-i r / sqrt(1 - r^2), so
/// for small r the interval is split geometrically at 8r, 64r, ...
fn substituted_integral(ell: u32, k2: u32, r: f64) -> f64 {
    let r2 = r * r;
    let one_minus_r2 = (1.0 - r) * (1.0 + r);
    let u_pow = k2 as i32 - 1;
    let ell = ell as i32;
    let integrand = |u: f64| {
        let s = (r2 + one_minus_r2 * u * u).sqrt();
        let one_minus_s = one_minus_r2 * (1.0 - u) * (1.0 + u) / (1.0 + s);
        u.powi(u_pow) * one_minus_s.powi(ell)
    };
    let mut breaks = vec![0.0];
    let mut b = 8.0 * r;
    while b < 1.0 {
        breaks.push(b);
        b *= 8.0;
    }
    breaks.push(1.0);
    breaks
        .windows(2)
        .map(|w| integrate_to_tolerance(w[0], w[1], &integrand))
        .sum()
}

fn integrate_to_tolerance<F: Fn(f64) -> f64>(a: f64, b: f64, f: &F) -> f64 {
    let mut prev = doubling_rule(0).integrate(a, b, f);
    for level in 1..7 {
        let next = doubling_rule(level).integrate(a, b, f);
        if (next - prev).abs() <= QUADRATURE_REL_TOL * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

/// phi_{l,k}(r) for r >= 0 (zero outside the unit support).
pub fn phi_eval(params: &WendlandParams, r: f64) -> f64 {
    if r >= 1.0 {
        return 0.0;
    }
    WendlandFunction::new(*params).eval(r.max(0.0))
}

/// phi_{l,k}(r) from the Gauss hypergeometric form in the variable 1 - r^2.
///
/// Converges geometrically for r bounded away from zero; near r = 0 the
/// series slows to algebraic convergence, so this is a verification path.
pub fn phi_hypergeometric(params: &WendlandParams, r: f64) -> Result<f64> {
    if r >= 1.0 {
        return Ok(0.0);
    }
    if r < 0.0 {
        return Err(Error::Domain(format!("r must be nonnegative, got {r}")));
    }
    let l = f64::from(params.ell);
    let k = params.k();
    let x = (1.0 - r) * (1.0 + r);
    let series = HypSeriesParams::new(&[l / 2.0, (l + 1.0) / 2.0], &[l + k + 1.0], x)
        .with_tolerance(1e-17, 5_000_000);
    let f = hyp_series(&series)?;
    let ln_pref = log_gamma_unchecked(l + 1.0)
        - (l + k) * std::f64::consts::LN_2
        - log_gamma_unchecked(l + k + 1.0)
        + (l + k) * x.ln();
    Ok(ln_pref.exp() * f)
}

/// Tabulated closed forms, up to a positive constant factor.
///
/// Integer k (d = 2 or 3, k = 1..4): `(1 - r)^(2k+2) T_k(r)`. Half-integer k
/// (d = 2, k = 1/2, 3/2, 5/2): `P(r^2) L(r) + Q(r^2) S(r)` with
/// `L = log(r / (1 + S))`, `S = sqrt(1 - r^2)`.
pub fn closed_form_oracle(params: &WendlandParams, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "closed forms are tabulated on [0, 1], got r={r}"
        )));
    }
    let unsupported = || {
        Err(Error::Unsupported(format!(
            "no tabulated closed form for {params}"
        )))
    };
    if params.is_original() {
        if !(params.d == 2 || params.d == 3) {
            return unsupported();
        }
        let k = params.k2 / 2;
        let Some(t) = original_factor(k) else {
            return unsupported();
        };
        let poly = t.iter().rev().fold(0.0, |acc, &c| acc * r + c as f64);
        return Ok((1.0 - r).powi(2 * k as i32 + 2) * poly);
    }
    if params.d != 2 {
        return unsupported();
    }
    let Some(row) = MissingRow::for_k2(params.k2) else {
        return unsupported();
    };
    Ok(row.eval(r))
}

/// Polynomial factor T_k (ascending powers) of the tabulated original functions.
pub fn original_factor(k: u32) -> Option<&'static [i64]> {
    match k {
        1 => Some(&[1, 4]),
        2 => Some(&[3, 18, 35]),
        3 => Some(&[1, 8, 25, 32]),
        4 => Some(&[5, 50, 210, 450, 429]),
        _ => None,
    }
}

/// (1 - r)^(2k+2) T_k(r) as an exact polynomial.
pub fn original_closed_form(k: u32) -> Option<RationalPolynomial> {
    let t = RationalPolynomial::from_integers(original_factor(k)?);
    Some(RationalPolynomial::one_minus_r_pow(2 * k + 2).mul(&t))
}

// P and Q as polynomials in u = r^2, ascending.
const MISSING_ROWS: [(u32, &[i64], &[i64]); 3] = [
    (1, &[0, 3], &[1, 2]),
    (3, &[0, 0, -90, -15], &[4, -28, -81]),
    (5, &[0, 0, 0, 2520, 945], &[16, -136, 690, 2639, 256]),
];

const SERIES_TERMS: usize = 160;
const SERIES_SWITCH_R: f64 = 0.5;

struct MissingRow {
    p: &'static [i64],
    q: &'static [i64],
    /// B(t) = Q(1-t) - P(1-t) atanh(sqrt t)/sqrt t, as a power series in t
    series: Vec<f64>,
}

impl MissingRow {
    fn for_k2(k2: u32) -> Option<&'static Self> {
        static ROWS: OnceLock<Vec<(u32, MissingRow)>> = OnceLock::new();
        let rows = ROWS.get_or_init(|| {
            MISSING_ROWS
                .iter()
                .map(|&(k2, p, q)| {
                    (
                        k2,
                        MissingRow {
                            p,
                            q,
                            series: missing_series(p, q),
                        },
                    )
                })
                .collect()
        });
        rows.iter().find(|row| row.0 == k2).map(|row| &row.1)
    }

    fn eval(&self, r: f64) -> f64 {
        let u = r * r;
        let horner = |c: &[i64]| c.iter().rev().fold(0.0, |acc, &x| acc * u + x as f64);
        if r == 0.0 {
            // r^2 L(r) -> 0 and every P has a factor r^2
            return horner(self.q);
        }
        let s = ((1.0 - r) * (1.0 + r)).sqrt();
        if r <= SERIES_SWITCH_R {
            let l = (r / (1.0 + s)).ln();
            return horner(self.p) * l + horner(self.q) * s;
        }
        // P L + Q S = S (Q - P atanh(S)/S); the low-order cancellation is exact
        let t = s * s;
        let b = self.series.iter().rev().fold(0.0, |acc, c| acc * t + c);
        s * b
    }
}

fn substitute_one_minus_t(c: &[i64]) -> Vec<BigRational> {
    // sum_i c_i (1 - t)^i
    let mut out = vec![BigRational::zero(); c.len()];
    for (i, &ci) in c.iter().enumerate() {
        for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
            let b = binomial(i as u32, j as u32) * BigInt::from(ci);
            *slot += BigRational::from_integer(if j.is_multiple_of(2) { b } else { -b });
        }
    }
    out
}

fn missing_series(p: &[i64], q: &[i64]) -> Vec<f64> {
    let p_t = substitute_one_minus_t(p);
    let q_t = substitute_one_minus_t(q);
    (0..SERIES_TERMS)
        .map(|m| {
            let mut c = q_t.get(m).cloned().unwrap_or_else(BigRational::zero);
            for (i, pi) in p_t.iter().enumerate().take(m + 1) {
                let odd = BigInt::from(2 * (m - i) + 1);
                c -= pi / BigRational::from_integer(odd);
            }
            rational_to_f64(&c)
        })
        .collect()
}
