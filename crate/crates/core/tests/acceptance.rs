//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use wendland_kit::convergence::{sup_error, sweep};
use wendland_kit::fourier::weighted_series::{ft_psi_series, ln_majorant, ln_weight};
use wendland_kit::fourier::{c_const, ft_phi, ft_psi, FourierSeriesSpec};
use wendland_kit::interp::{run_experiment, ExperimentConfig, ExperimentRow, FrankeConvention};
use wendland_kit::scaling::{delta, gaussian_ft, ScaledKernel};
use wendland_kit::wendland::{
    closed_form_oracle, phi_area, phi_eval, phi_poly_coeffs, phi_zero, RationalPolynomial,
    WendlandParams,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(d: u32, k2: u32) -> WendlandParams {
    WendlandParams::new(d, k2).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Original functions for k = 1..4: exponent of (1 - r) and the polynomial factor, ascending.
const ORIGINAL_ROWS: [(u32, &[i64]); 4] = [
    (4, &[1, 4]),
    (6, &[3, 18, 35]),
    (8, &[1, 8, 25, 32]),
    (10, &[5, 50, 210, 450, 429]),
];

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for d in [3, 2] {
        for (k, (power, factor)) in (1..=4u32).zip(ORIGINAL_ROWS) {
            let table = RationalPolynomial::one_minus_r_pow(power)
                .mul(&RationalPolynomial::from_integers(factor));
            let computed = phi_poly_coeffs(&params(d, 2 * k)).map_err(|e| e.to_string())?;
            let Some(ratio) = computed.positive_ratio_to(&table) else {
                return Err(format!(
                    "d={d}, k={k}: not a positive multiple of the table row"
                ));
            };
            if ratio <= BigRational::from_integer(BigInt::from(0)) {
                return Err(format!("d={d}, k={k}: nonpositive ratio {ratio}"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} rows exact up to a positive rational factor"
    ))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for k2 in [1, 3, 5] {
        let p = params(2, k2);
        let ratios: Vec<f64> = (0..50)
            .map(|i| {
                let r = 0.02 + 0.96 * f64::from(i) / 49.0;
                phi_eval(&p, r) / closed_form_oracle(&p, r).unwrap()
            })
            .collect();
        let spread = ratios
            .iter()
            .map(|q| rel(*q, ratios[0]))
            .fold(0.0, f64::max);
        worst = worst.max(spread);
    }
    if worst < 1e-8 {
        Ok(format!("max ratio spread {worst:.2e}"))
    } else {
        Err(format!("ratio spread {worst:.2e} exceeds 1e-8"))
    }
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for d in 1..=3 {
        for k2 in 1..=10 {
            let l = common::ell(d, k2);
            let zero = common::phi_by_quadrature(l, k2, 0.0, 1e-15);
            let area = common::integrate(
                |r| common::phi_by_quadrature(l, k2, r, 1e-15),
                0.0,
                1.0,
                1e-14,
            );
            let e = (phi_zero(l, k2) - zero)
                .abs()
                .max((phi_area(l, k2) - area).abs());
            if e > 1e-10 {
                return Err(format!("d={d}, k2={k2}: deviation {e:.2e}"));
            }
            worst = worst.max(e);
        }
    }
    Ok(format!("max absolute deviation {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let mut worst_area = 0.0f64;
    let mut worst_zero = 0.0f64;
    for d in [1, 2, 3, 5] {
        for k2 in 1..=12 {
            for alpha in [0.5, 1.0, 2.0] {
                let kern = ScaledKernel::new(params(d, k2), alpha).unwrap();
                let area = common::integrate(|y| kern.psi(y), 0.0, kern.delta(), 1e-13);
                let want = PI.sqrt() / (2.0 * alpha.sqrt());
                worst_area = worst_area.max(rel(area, want));
                worst_zero = worst_zero.max((kern.psi(0.0) - 1.0).abs());
            }
        }
    }
    if worst_area < 1e-8 && worst_zero < 1e-12 {
        Ok(format!(
            "area rel err {worst_area:.2e}, |psi(0)-1| {worst_zero:.2e}"
        ))
    } else {
        Err(format!(
            "area rel err {worst_area:.2e}, |psi(0)-1| {worst_zero:.2e}"
        ))
    }
}

fn criterion_5() -> Outcome {
    let mut violations = Vec::new();
    let mut checked = 0;
    for d in 1..=10u32 {
        for k2 in 1..=100u32 {
            let k = f64::from(k2) / 2.0;
            if k < (f64::from(d) / 2.0).min(1.0) {
                continue;
            }
            for alpha in [0.5, 1.0, 2.0] {
                let l = common::ell(d, k2);
                let dl = delta(l, k2, alpha).unwrap();
                checked += 1;
                if dl > 3.0 * k.sqrt() / alpha.sqrt() {
                    violations.push(format!("d={d} k2={k2} alpha={alpha}"));
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("{checked} cases, zero violations"))
    } else {
        Err(format!(
            "{} of {checked} cases violate the bound: {}",
            violations.len(),
            violations.join("; ")
        ))
    }
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    for d in 1..=3 {
        for k2 in 1..=12 {
            let p = params(d, k2);
            let spec = FourierSeriesSpec::new(p, 1.0).unwrap();
            let at0 = ft_phi(&spec, 0.0).unwrap();
            worst = worst.max(rel(at0, c_const(d, p.ell(), k2)));
            if d == 1 {
                worst = worst.max(rel(at0, (2.0 / PI).sqrt() * phi_area(p.ell(), k2)));
            }
        }
    }
    if worst >= 1e-10 {
        return Err(format!("z=0 relative deviation {worst:.2e}"));
    }
    // l = 3, k = 1 in one dimension: phi(r) = (1 - r)^4 (4r + 1) / 20
    let mut spec = FourierSeriesSpec::new(params(3, 2), 1.0).unwrap();
    spec.d = 1;
    let phi = |r: f64| (1.0 - r).powi(4) * (4.0 * r + 1.0) / 20.0;
    let mut cos_worst = 0.0f64;
    for z in [0.5, 1.0, 2.0] {
        let direct =
            (2.0 / PI).sqrt() * common::integrate(|r| phi(r) * (z * r).cos(), 0.0, 1.0, 1e-15);
        cos_worst = cos_worst.max((ft_phi(&spec, z).unwrap() - direct).abs());
    }
    let d1_area = rel(ft_phi(&spec, 0.0).unwrap(), (2.0 / PI).sqrt() / 60.0);
    if cos_worst < 1e-8 && d1_area < 1e-10 {
        Ok(format!(
            "z=0 rel {worst:.2e}; cosine transform abs {cos_worst:.2e}"
        ))
    } else {
        Err(format!(
            "cosine transform abs {cos_worst:.2e}, l=3 area rel {d1_area:.2e}"
        ))
    }
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    for d in [2, 3] {
        let maxima: Vec<f64> = [4, 20, 60, 100]
            .iter()
            .map(|&k2| {
                let spec = FourierSeriesSpec::new(params(d, k2), 1.0).unwrap();
                (0..=100)
                    .map(|i| {
                        let z = 5.0 * f64::from(i) / 100.0;
                        (ft_psi(&spec, z).unwrap() - gaussian_ft(d, 1.0, z)).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        if !maxima.windows(2).all(|w| w[1] < w[0]) {
            return Err(format!("d={d}: maxima {maxima:?} not strictly decreasing"));
        }
        notes.push(format!("d={d} {:.2e}->{:.2e}", maxima[0], maxima[3]));
    }
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for (i, k2) in [1, 2, 3, 4, 5, 7, 10, 20, 40, 100].into_iter().enumerate() {
        for z in [0.7, 2.3] {
            let d = 1 + (i as u32) % 3;
            let spec = FourierSeriesSpec::new(params(d, k2), 1.0).unwrap();
            let series = ft_psi_series(&spec, z).unwrap().value;
            worst = worst.max(rel(series, ft_psi(&spec, z).unwrap()));
            pairs += 1;
        }
    }
    if worst >= 1e-9 {
        return Err(format!("series path disagrees by {worst:.2e}"));
    }
    let mut majorant_checks = 0;
    for d in 1..=3 {
        for k2 in 2..=100 {
            for alpha in [0.5, 1.0, 2.0] {
                let spec = FourierSeriesSpec::new(params(d, k2), alpha).unwrap();
                for n in 0..=40 {
                    let (w, u) = (
                        ln_weight(&spec, n).unwrap().exp(),
                        ln_majorant(&spec, n).exp(),
                    );
                    if w > u * (1.0 + 1e-12) {
                        return Err(format!("w_n > U_n at d={d}, k2={k2}, alpha={alpha}, n={n}"));
                    }
                    majorant_checks += 1;
                }
            }
        }
    }
    Ok(format!(
        "{}; {pairs} series pairs within {worst:.1e}; {majorant_checks} majorant checks",
        notes.join(", ")
    ))
}

/// Brute-force sup |psi - G| from the tabulated closed forms on 10^6 equally
/// spaced points of [0, max(delta, 6)], plus the support endpoint itself.
fn dense_oracle(d: u32, k2: u32) -> f64 {
    let p = params(d, k2);
    let dl = common::delta_reference(p.ell(), k2, 1.0);
    let origin = closed_form_oracle(&p, 0.0).unwrap();
    let err = |y: f64| {
        let psi = if y < dl {
            closed_form_oracle(&p, y / dl).unwrap() / origin
        } else {
            0.0
        };
        (psi - (-y * y).exp()).abs()
    };
    let top = dl.max(6.0);
    let n = 1_000_000;
    (0..=n)
        .map(|i| err(top * f64::from(i) / f64::from(n)))
        .fold(err(dl), f64::max)
}

/// `dense_oracle` output, frozen; the oracle is recomputed and must not drift.
const FROZEN_ORACLE: [(u32, u32, f64); 6] = [
    (3, 2, 0.017980280308686925),
    (3, 4, 0.007390722623200785),
    (3, 8, 0.005282233633335132),
    (2, 1, 0.03382938040300454),
    (2, 3, 0.01159935791576816),
    (2, 5, 0.007997155255649868),
];

fn criterion_8() -> Outcome {
    let grid = 256;
    for (d, k2s) in [(3, [2, 10, 100]), (2, [1, 11, 99])] {
        let recs = sweep(d, &k2s, 1.0, grid).map_err(|e| e.to_string())?;
        let eps: Vec<f64> = recs.iter().map(|r| r.epsilon).collect();
        if !(eps[2] < eps[1] && eps[1] < eps[0]) {
            return Err(format!("d={d}: ordering violated, epsilon {eps:?}"));
        }
        let recs4 = sweep(d, &k2s, 4.0, grid).map_err(|e| e.to_string())?;
        for (a, b) in recs.iter().zip(&recs4) {
            if rel(b.epsilon, a.epsilon) > 1e-8 {
                return Err(format!(
                    "d={d}, k2={}: alpha=4 gives {} vs {}",
                    a.k2, b.epsilon, a.epsilon
                ));
            }
        }
    }
    let mut worst = 0.0f64;
    for (d, k2, frozen) in FROZEN_ORACLE {
        let oracle = dense_oracle(d, k2);
        if rel(oracle, frozen) > 1e-12 {
            return Err(format!(
                "d={d}, k2={k2}: oracle {oracle:.17e} drifted from frozen {frozen:.17e}"
            ));
        }
        let kern = ScaledKernel::new(params(d, k2), 1.0).unwrap();
        let eps = sup_error(&kern, grid).map_err(|e| e.to_string())?.epsilon;
        worst = worst.max(rel(eps, oracle));
    }
    if worst < 1e-4 {
        Ok(format!(
            "orderings hold, alpha-invariant, oracle rel err {worst:.2e}"
        ))
    } else {
        Err(format!("sup_error vs dense oracle rel err {worst:.2e}"))
    }
}

/// (kernel, k, L2, Linf, kappa, lambda_min, lambda_max) with None where the table is blank.
type TableRow = (
    &'static str,
    &'static str,
    f64,
    f64,
    f64,
    Option<f64>,
    Option<f64>,
);

const BENCHMARK_ROWS: [TableRow; 11] = [
    ("phi", "1", 2.25e-1, 6.96e-1, 1.71, None, None),
    ("phi", "2", 2.61e-1, 7.95e-1, 1.22, None, None),
    ("phi", "3", 3.00e-1, 8.90e-1, 1.07, None, None),
    ("phi", "4", 3.36e-1, 9.73e-1, 1.02, None, None),
    ("phi", "5", 3.63e-1, 1.03, 1.01, None, None),
    (
        "psi",
        "1",
        1.89e-1,
        5.89e-1,
        1.76e1,
        Some(1.55e-1),
        Some(2.74),
    ),
    (
        "psi",
        "2",
        1.86e-1,
        5.78e-1,
        3.14e1,
        Some(9.62e-2),
        Some(3.02),
    ),
    (
        "psi",
        "3",
        1.87e-1,
        5.79e-1,
        4.96e1,
        Some(6.50e-2),
        Some(3.22),
    ),
    (
        "psi",
        "4",
        1.87e-1,
        5.80e-1,
        5.56e1,
        Some(5.98e-2),
        Some(3.30),
    ),
    (
        "psi",
        "5",
        1.87e-1,
        5.81e-1,
        6.37e1,
        Some(5.29e-2),
        Some(3.37),
    ),
    (
        "gauss",
        "inf",
        1.89e-1,
        5.89e-1,
        9.40e1,
        Some(4.03e-2),
        Some(3.78),
    ),
];

fn criterion_9() -> Outcome {
    let config = ExperimentConfig::default();
    assert_eq!(config.convention, FrankeConvention::Direct);
    let rows = run_experiment(&config).map_err(|e| e.to_string())?;
    let find = |kernel: &str, k: &str| -> &ExperimentRow {
        rows.iter()
            .find(|r| r.kernel == kernel && r.k_label == k)
            .expect("row present")
    };
    let mut misses = Vec::new();
    let mut total = 0;
    for (kernel, k, l2, linf, kappa, lmin, lmax) in BENCHMARK_ROWS {
        let row = find(kernel, k);
        let mut check = |name: &str, got: f64, want: f64| {
            total += 1;
            if rel(got, want) > 0.02 {
                misses.push(format!("{kernel} k={k} {name} {got:.3e} vs {want:.3e}"));
            }
        };
        check("L2", row.l2_error, l2);
        check("Linf", row.linf_error, linf);
        check("kappa", row.cond_2, kappa);
        if let (Some(lo), Some(hi)) = (lmin, lmax) {
            check("lambda_min", row.lambda_min, lo);
            check("lambda_max", row.lambda_max, hi);
        }
    }
    let kappa = |kernel: &str, k: &str| find(kernel, k).cond_2;
    let phi_dec = (1..5).all(|k| kappa("phi", &(k + 1).to_string()) < kappa("phi", &k.to_string()));
    let psi_inc = (1..5).all(|k| kappa("psi", &(k + 1).to_string()) > kappa("psi", &k.to_string()));
    let psi_below_gauss = kappa("psi", "5") < kappa("gauss", "inf");
    let spd = rows.iter().all(|r| r.lambda_min > 0.0);
    let mut problems = misses.clone();
    if !phi_dec {
        problems.push("phi kappa not decreasing".into());
    }
    if !psi_inc {
        problems.push("psi kappa not increasing".into());
    }
    if !psi_below_gauss {
        problems.push(format!(
            "psi kappa(k=5) {:.3e} not below gaussian {:.3e}",
            kappa("psi", "5"),
            kappa("gauss", "inf")
        ));
    }
    if !spd {
        problems.push("a matrix is not positive definite".into());
    }
    if problems.is_empty() {
        Ok(format!("{total} entries within 2%, orderings hold"))
    } else {
        Err(format!(
            "{}/{total} entries outside 2%; {}",
            misses.len(),
            problems.join("; ")
        ))
    }
}

fn criterion_10() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_wendland-kit");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [(&str, Vec<&str>); 2] = [
        (
            "converge",
            vec![
                "converge", "--d", "3", "--alpha", "1", "--k-min", "1", "--k-max", "50",
            ],
        ),
        ("interp", vec!["interp"]),
    ];
    let mut sizes = Vec::new();
    for (name, args) in runs {
        let mut outputs = Vec::new();
        for attempt in 0..2 {
            let path = dir.path().join(format!("{name}-{attempt}.csv"));
            let status = Command::new(exe)
                .args(&args)
                .arg("--out")
                .arg(&path)
                .status()
                .map_err(|e| e.to_string())?;
            if !status.success() {
                return Err(format!("{name} exited with {status}"));
            }
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{name}: outputs differ"));
        }
        if name == "converge" {
            let rows = String::from_utf8_lossy(&outputs[0]).lines().count() - 2;
            if rows != 50 {
                return Err(format!("converge wrote {rows} rows, expected 50"));
            }
        }
        sizes.push(format!("{name} {} bytes", outputs[0].len()));
    }
    Ok(format!("byte-identical: {}", sizes.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact original-function coefficients", criterion_1),
        ("missing-function closed forms", criterion_2),
        ("phi(0) and area vs quadrature", criterion_3),
        ("equal-area rescaling", criterion_4),
        ("support radius bound", criterion_5),
        ("transform at zero and cosine transform", criterion_6),
        ("transform convergence, series path, majorant", criterion_7),
        ("sup-norm convergence", criterion_8),
        ("interpolation benchmark table", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
