//! Reference computations shared by the integration tests. Everything here is
//! deliberately independent of the library's own numerics.

#![allow(dead_code)]

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let pair = f(c - x) + f(c + x);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, floor: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= tol.max(floor) || depth == 0 {
        return value;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, floor, depth - 1) + adapt(f, m, b, 0.5 * tol, floor, depth - 1)
}

/// Adaptive 7/15-point Gauss–Kronrod to absolute tolerance `tol`, never asking
/// a subinterval for more than rounding-level accuracy of the whole integral.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (rough, _) = gk15(&f, a, b);
    adapt(&f, a, b, tol, 1e-17 * rough.abs(), 40)
}

/// Gamma(k2 / 2) for positive k2, by exact recurrence from Gamma(1) and Gamma(1/2).
pub fn gamma_half(k2: u32) -> f64 {
    let (mut x, mut g) = if k2.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (0.5, std::f64::consts::PI.sqrt())
    };
    while 2.0 * x < f64::from(k2) {
        g *= x;
        x += 1.0;
    }
    g
}

/// l = floor(d/2 + k) + 1
pub fn ell(d: u32, k2: u32) -> u32 {
    (d + k2) / 2 + 1
}

/// The defining integral of phi_{l,k}(r), evaluated by adaptive quadrature after
/// s = r + (1 - r) v^2, which removes the endpoint singularity at s = r.
pub fn phi_by_quadrature(ell: u32, k2: u32, r: f64, tol: f64) -> f64 {
    if r >= 1.0 {
        return 0.0;
    }
    let k = f64::from(k2) / 2.0;
    let l = ell as i32;
    // Gauss–Kronrod never samples the endpoints, so v = 0 is not evaluated
    let integrand = |v: f64| {
        let gap = (1.0 - r) * v * v;
        let s = r + gap;
        let jac = 2.0 * (1.0 - r) * v;
        s * (1.0 - s).powi(l) * (gap * (s + r)).powf(k - 1.0) * jac
    };
    integrate(integrand, 0.0, 1.0, tol) / (gamma_half(k2) * 2f64.powf(k - 1.0))
}

/// delta = (l + 2k + 1) Gamma(k + 1/2) / (2 sqrt(alpha) Gamma(k + 1)), from exact gammas.
pub fn delta_reference(ell: u32, k2: u32, alpha: f64) -> f64 {
    let k = f64::from(k2) / 2.0;
    (f64::from(ell) + 2.0 * k + 1.0) * gamma_half(k2 + 1)
        / (2.0 * alpha.sqrt() * gamma_half(k2 + 2))
}
