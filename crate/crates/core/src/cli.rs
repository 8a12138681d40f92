//! Command-line front end. `run` parses arguments, dispatches to the library
//! and returns the process exit code: 0 on success, 2 on usage errors and 1
//! on numerical failures.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::convergence::sweep;
use crate::error::Error;
use crate::fourier::{ft_psi_detailed, FourierSeriesSpec};
use crate::interp::{run_experiment, ExperimentConfig, FrankeConvention, KernelFamily};
use crate::output::{self, CoefficientRow, EvalRow, Format, FourierRow};
use crate::scaling::{gaussian, gaussian_ft, ScaledKernel};
use crate::wendland::{phi_poly_coeffs, WendlandParams};

pub const DEFAULT_COARSE_GRID: usize = 256;

#[derive(Debug, Parser)]
#[command(
    name = "wendland-kit",
    version,
    about = "Wendland functions and their Gaussian limit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate psi against the Gaussian at given radii
    Eval(EvalArgs),
    /// Exact polynomial coefficients of phi for integer k
    Coeffs(CoeffsArgs),
    /// Tabulate the radial Fourier transform of psi against the Gaussian's
    Fourier(FourierArgs),
    /// Sup-norm distance between psi and the Gaussian over a range of k
    Converge(ConvergeArgs),
    /// Franke-function interpolation benchmark
    Interp(InterpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

fn parse_k(text: &str) -> Result<u32, String> {
    output::parse_k2(text).map_err(|e| e.to_string())
}

fn parse_alpha(text: &str) -> Result<f64, String> {
    let a: f64 = text.parse().map_err(|e| format!("{e}"))?;
    if a > 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(format!("alpha must be positive and finite, got {text}"))
    }
}

fn parse_dimension(text: &str) -> Result<u32, String> {
    match text.parse::<u32>() {
        Ok(d) if d >= 1 => Ok(d),
        _ => Err(format!(
            "dimension must be a positive integer, got '{text}'"
        )),
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub d: u32,
    /// Smoothness, integer or half-integer (e.g. 2.5)
    #[arg(long = "k", value_parser = parse_k)]
    pub k2: u32,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Comma-separated radii
    #[arg(long, value_delimiter = ',', required = true)]
    pub points: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub d: u32,
    #[arg(long = "k", value_parser = parse_k)]
    pub k2: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub d: u32,
    #[arg(long = "k", value_parser = parse_k)]
    pub k2: u32,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Comma-separated frequencies; overrides --z-max/--samples
    #[arg(long, value_delimiter = ',')]
    pub points: Option<Vec<f64>>,
    #[arg(long, default_value_t = 5.0)]
    pub z_max: f64,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub d: u32,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Smallest k (defaults to 1, or 0.5 with --half-integers)
    #[arg(long, value_parser = parse_k)]
    pub k_min: Option<u32>,
    #[arg(long, value_parser = parse_k)]
    pub k_max: u32,
    /// Sweep k = 1/2, 3/2, ... instead of integer k
    #[arg(long)]
    pub half_integers: bool,
    /// Initial grid size of the sup-norm search
    #[arg(long, default_value_t = DEFAULT_COARSE_GRID)]
    pub coarse_grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Phi,
    Psi,
    Gauss,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Scaled,
    Direct,
}

#[derive(Debug, Args)]
pub struct InterpArgs {
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
    #[arg(long, default_value_t = 5.0)]
    pub domain_length: f64,
    #[arg(long, default_value_t = 2.0, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = KernelArg::All)]
    pub kernel: KernelArg,
    /// Comma-separated smoothness values
    #[arg(long = "k", value_delimiter = ',', value_parser = parse_k, default_value = "1,2,3,4,5")]
    pub k2: Vec<u32>,
    #[arg(long, default_value_t = 2, value_parser = parse_dimension)]
    pub d: u32,
    #[arg(long, value_enum, default_value_t = ConventionArg::Direct)]
    pub franke_convention: ConventionArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

fn numeric(context: String) -> impl FnOnce(Error) -> Failure {
    move |e| match e {
        Error::InvalidArgument(msg) => Failure::Usage(format!("{msg} ({context})")),
        other => Failure::Numeric(format!("{other} ({context})")),
    }
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Numeric(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Numeric(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run_eval(a: &EvalArgs) -> Result<(), Failure> {
    let ctx = format!(
        "d={}, k={}, alpha={}",
        a.d,
        output::k_decimal(a.k2),
        a.alpha
    );
    let kernel = WendlandParams::new(a.d, a.k2)
        .and_then(|p| ScaledKernel::new(p, a.alpha))
        .map_err(numeric(ctx))?;
    let rows: Vec<EvalRow> = a
        .points
        .iter()
        .map(|&y| {
            let psi = kernel.psi(y);
            let g = gaussian(a.alpha, y);
            EvalRow {
                y,
                psi,
                gaussian: g,
                diff: psi - g,
            }
        })
        .collect();
    emit(
        &a.output,
        &output::eval_output(&rows, a.output.format.into()),
    )
}

fn run_coeffs(a: &CoeffsArgs) -> Result<(), Failure> {
    let ctx = format!("d={}, k={}", a.d, output::k_decimal(a.k2));
    let poly = WendlandParams::new(a.d, a.k2)
        .and_then(|p| phi_poly_coeffs(&p))
        .map_err(numeric(ctx))?;
    let rows: Vec<CoefficientRow> = poly
        .coefficient_strings()
        .into_iter()
        .enumerate()
        .map(|(degree, coefficient)| CoefficientRow {
            degree,
            coefficient,
        })
        .collect();
    emit(
        &a.output,
        &output::coeffs_output(&rows, a.output.format.into()),
    )
}

fn run_fourier(a: &FourierArgs) -> Result<(), Failure> {
    let zs: Vec<f64> = match &a.points {
        Some(p) => p.clone(),
        None => {
            if a.samples < 2 || !(a.z_max > 0.0) {
                return Err(Failure::Usage(
                    "--samples must be at least 2 and --z-max positive".into(),
                ));
            }
            (0..a.samples)
                .map(|i| a.z_max * i as f64 / (a.samples - 1) as f64)
                .collect()
        }
    };
    let ctx = format!(
        "d={}, k={}, alpha={}",
        a.d,
        output::k_decimal(a.k2),
        a.alpha
    );
    let spec = WendlandParams::new(a.d, a.k2)
        .and_then(|p| FourierSeriesSpec::new(p, a.alpha))
        .map_err(numeric(ctx.clone()))?;
    let mut rows = Vec::with_capacity(zs.len());
    for z in zs {
        let t = ft_psi_detailed(&spec, z).map_err(numeric(format!("{ctx}, z={z}")))?;
        if t.flagged() {
            eprintln!("warning: heavy cancellation at z={z} ({ctx})");
        }
        let g = gaussian_ft(a.d, a.alpha, z);
        rows.push(FourierRow {
            z,
            ft_psi: t.value,
            gaussian_ft: g,
            difference: t.value - g,
        });
    }
    emit(
        &a.output,
        &output::fourier_output(&rows, a.output.format.into()),
    )
}

fn run_converge(a: &ConvergeArgs) -> Result<(), Failure> {
    let parity = u32::from(a.half_integers);
    let k_min = a.k_min.unwrap_or(if a.half_integers { 1 } else { 2 });
    for (name, k2) in [("--k-min", k_min), ("--k-max", a.k_max)] {
        if k2 % 2 != parity {
            let kind = if a.half_integers {
                "a half-integer"
            } else {
                "an integer"
            };
            return Err(Failure::Usage(format!(
                "{name} must be {kind}, got {}",
                output::k_decimal(k2)
            )));
        }
    }
    if k_min > a.k_max {
        return Err(Failure::Usage("--k-min exceeds --k-max".into()));
    }
    let k2s: Vec<u32> = (k_min..=a.k_max).step_by(2).collect();
    let ctx = format!("d={}, alpha={}", a.d, a.alpha);
    let records = sweep(a.d, &k2s, a.alpha, a.coarse_grid).map_err(numeric(ctx))?;
    let text = match a.output.format {
        FormatArg::Csv => output::sweep_csv(&records),
        FormatArg::Json => output::sweep_json(&records),
    };
    emit(&a.output, &text)?;
    let failed: Vec<String> = records
        .iter()
        .filter_map(|r| {
            r.failure.as_ref().map(|f| {
                format!(
                    "d={}, k={}, alpha={}: {f}",
                    r.d,
                    output::k_decimal(r.k2),
                    r.alpha
                )
            })
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numeric(failed.join("\n")))
    }
}

fn run_interp(a: &InterpArgs) -> Result<(), Failure> {
    let families = match a.kernel {
        KernelArg::Phi => vec![KernelFamily::Phi],
        KernelArg::Psi => vec![KernelFamily::Psi],
        KernelArg::Gauss => vec![KernelFamily::Gauss],
        KernelArg::All => vec![KernelFamily::Phi, KernelFamily::Psi, KernelFamily::Gauss],
    };
    let config = ExperimentConfig {
        grid: a.grid,
        domain_length: a.domain_length,
        alpha: a.alpha,
        d: a.d,
        k2_values: a.k2.clone(),
        families,
        convention: match a.franke_convention {
            ConventionArg::Scaled => FrankeConvention::Scaled,
            ConventionArg::Direct => FrankeConvention::Direct,
        },
    };
    let ctx = format!("grid={}, L={}, alpha={}", a.grid, a.domain_length, a.alpha);
    let rows = run_experiment(&config).map_err(numeric(ctx))?;
    let text = match a.output.format {
        FormatArg::Csv => output::experiment_csv(&rows),
        FormatArg::Json => output::experiment_json(&rows),
    };
    emit(&a.output, &text)
}

pub fn dispatch(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Eval(a) => run_eval(a),
        Command::Coeffs(a) => run_coeffs(a),
        Command::Fourier(a) => run_fourier(a),
        Command::Converge(a) => run_converge(a),
        Command::Interp(a) => run_interp(a),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!(
                "{}",
                <Cli as clap::CommandFactory>::command().render_usage()
            );
            2
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

/// Parses `args` (program name first) and runs the selected subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli),
        Err(e) => {
            let _ = e.print();
            e.exit_code()
        }
    }
}
