//! CSV and JSON emission for the command-line tools, plus the matching
//! parsers used to check that written files round-trip.

use std::io::Write;

use serde::Serialize;

use crate::convergence::SweepRecord;
use crate::error::{Error, Result};
use crate::interp::ExperimentRow;
use crate::wendland::derive_ell;

pub const HEADER: &str = "# wendland-kit v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// 17 significant digits; parses back to the identical f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// 6 significant digits.
pub fn fmt6(x: f64) -> String {
    format!("{x:.5e}")
}

/// Exact decimal text for k = k2 / 2.
pub fn k_decimal(k2: u32) -> String {
    if k2.is_multiple_of(2) {
        (k2 / 2).to_string()
    } else {
        format!("{}.5", k2 / 2)
    }
}

fn parse_error(msg: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("malformed CSV: {msg}"))
}

fn csv_string(columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = Vec::new();
    writeln!(out, "{HEADER}").expect("write to Vec");
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(columns).expect("write to Vec");
        for row in rows {
            w.write_record(&row).expect("write to Vec");
        }
        w.flush().expect("write to Vec");
    }
    String::from_utf8(out).expect("CSV is UTF-8")
}

fn csv_rows(text: &str, columns: &[&str]) -> Result<Vec<csv::StringRecord>> {
    if !text.starts_with(HEADER) {
        return Err(parse_error(format!("missing '{HEADER}' line")));
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(parse_error)?.clone();
    if header.iter().ne(columns.iter().copied()) {
        return Err(parse_error(format!("unexpected columns {:?}", header)));
    }
    reader.records().map(|r| r.map_err(parse_error)).collect()
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = rec.get(i).ok_or_else(|| parse_error("short row"))?;
    raw.parse()
        .map_err(|e| parse_error(format!("field {i} '{raw}': {e}")))
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serialises");
    s.push('\n');
    s
}

pub const SWEEP_COLUMNS: [&str; 8] = [
    "d",
    "k",
    "ell",
    "alpha",
    "epsilon",
    "argmax_y",
    "grid_points",
    "status",
];

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    csv_string(
        &SWEEP_COLUMNS,
        records.iter().map(|r| {
            vec![
                r.d.to_string(),
                k_decimal(r.k2),
                r.ell.to_string(),
                fmt17(r.alpha),
                fmt17(r.epsilon),
                fmt17(r.argmax_y),
                r.grid_points.to_string(),
                r.failure.clone().unwrap_or_else(|| "ok".into()),
            ]
        }),
    )
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRecord>> {
    csv_rows(text, &SWEEP_COLUMNS)?
        .iter()
        .map(|rec| {
            let d: u32 = field(rec, 0)?;
            let k2 = parse_k2(rec.get(1).unwrap_or_default())?;
            let ell: u32 = field(rec, 2)?;
            if ell != derive_ell(d, k2) {
                return Err(parse_error(format!(
                    "ell {ell} inconsistent with d={d}, k2={k2}"
                )));
            }
            let status: String = field(rec, 7)?;
            Ok(SweepRecord {
                d,
                k2,
                ell,
                alpha: field(rec, 3)?,
                epsilon: field(rec, 4)?,
                argmax_y: field(rec, 5)?,
                grid_points: field(rec, 6)?,
                failure: (status != "ok").then_some(status),
            })
        })
        .collect()
}

pub fn sweep_json(records: &[SweepRecord]) -> String {
    to_json(records)
}

pub const EXPERIMENT_COLUMNS: [&str; 8] = [
    "kernel",
    "n",
    "k",
    "l2_error",
    "linf_error",
    "cond_2",
    "lambda_min",
    "lambda_max",
];

pub fn experiment_csv(rows: &[ExperimentRow]) -> String {
    csv_string(
        &EXPERIMENT_COLUMNS,
        rows.iter().map(|r| {
            vec![
                r.kernel.clone(),
                r.n.to_string(),
                r.k_label.clone(),
                fmt6(r.l2_error),
                fmt6(r.linf_error),
                fmt6(r.cond_2),
                fmt6(r.lambda_min),
                fmt6(r.lambda_max),
            ]
        }),
    )
}

pub fn parse_experiment_csv(text: &str) -> Result<Vec<ExperimentRow>> {
    csv_rows(text, &EXPERIMENT_COLUMNS)?
        .iter()
        .map(|rec| {
            Ok(ExperimentRow {
                kernel: field(rec, 0)?,
                n: field(rec, 1)?,
                k_label: field(rec, 2)?,
                l2_error: field(rec, 3)?,
                linf_error: field(rec, 4)?,
                cond_2: field(rec, 5)?,
                lambda_min: field(rec, 6)?,
                lambda_max: field(rec, 7)?,
            })
        })
        .collect()
}

pub fn experiment_json(rows: &[ExperimentRow]) -> String {
    to_json(rows)
}

/// One sample of psi against the Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalRow {
    pub y: f64,
    pub psi: f64,
    pub gaussian: f64,
    pub diff: f64,
}

/// One sample of the transform of psi against that of the Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierRow {
    pub z: f64,
    pub ft_psi: f64,
    pub gaussian_ft: f64,
    pub difference: f64,
}

pub fn eval_output(rows: &[EvalRow], format: Format) -> String {
    match format {
        Format::Json => to_json(rows),
        Format::Csv => csv_string(
            &["y", "psi", "gaussian", "diff"],
            rows.iter()
                .map(|r| vec![fmt17(r.y), fmt17(r.psi), fmt17(r.gaussian), fmt17(r.diff)]),
        ),
    }
}

pub fn fourier_output(rows: &[FourierRow], format: Format) -> String {
    match format {
        Format::Json => to_json(rows),
        Format::Csv => csv_string(
            &["z", "ft_psi", "gaussian_ft", "difference"],
            rows.iter().map(|r| {
                vec![
                    fmt17(r.z),
                    fmt17(r.ft_psi),
                    fmt17(r.gaussian_ft),
                    fmt17(r.difference),
                ]
            }),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientRow {
    pub degree: usize,
    pub coefficient: String,
}

pub fn coeffs_output(rows: &[CoefficientRow], format: Format) -> String {
    match format {
        Format::Json => to_json(rows),
        Format::Csv => csv_string(
            &["degree", "coefficient"],
            rows.iter()
                .map(|r| vec![r.degree.to_string(), r.coefficient.clone()]),
        ),
    }
}

/// Parses k written as an integer or an integer plus ".5" into k2 = 2k.
/// Goes through the decimal text, never through a float.
pub fn parse_k2(text: &str) -> Result<u32> {
    let bad = || {
        Error::InvalidArgument(format!(
            "k must be a positive integer or half-integer, got '{text}'"
        ))
    };
    let t = text.trim();
    let (whole, frac) = match t.split_once('.') {
        Some((w, f)) => (w, f.trim_end_matches('0')),
        None => (t, ""),
    };
    let whole = if whole.is_empty() && !frac.is_empty() {
        "0"
    } else {
        whole
    };
    if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let w: u32 = whole.parse().map_err(|_| bad())?;
    let half = match frac {
        "" => 0,
        "5" => 1,
        _ => return Err(bad()),
    };
    let k2 = w
        .checked_mul(2)
        .and_then(|v| v.checked_add(half))
        .ok_or_else(bad)?;
    if k2 == 0 {
        return Err(bad());
    }
    Ok(k2)
}
