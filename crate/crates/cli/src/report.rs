//! Output rows and their CSV / JSON encodings.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const COLUMNS: [&str; 14] = [
    "preset",
    "model",
    "alpha",
    "algorithm",
    "param_name",
    "param_value",
    "var",
    "cvar",
    "var_abs_err",
    "cvar_abs_err",
    "rel_time",
    "n_grid",
    "nu",
    "wall_ms",
];

/// One `(alpha, algorithm, parameter value)` cell. Errors are against the
/// configured oracle and, for exponential losses, per unit of `V0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub preset: String,
    pub model: String,
    pub alpha: f64,
    pub algorithm: String,
    pub param_name: Option<String>,
    pub param_value: Option<f64>,
    pub var: f64,
    pub cvar: f64,
    pub var_abs_err: Option<f64>,
    pub cvar_abs_err: Option<f64>,
    pub rel_time: f64,
    pub n_grid: Option<usize>,
    pub nu: f64,
    pub wall_ms: f64,
}

impl Row {
    /// Same cell up to timing.
    pub fn same_numbers(&self, other: &Row) -> bool {
        let strip = |r: &Row| Row { rel_time: 0.0, wall_ms: 0.0, ..r.clone() };
        strip(self) == strip(other)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Resolved settings, including model defaults that were filled in.
    pub metadata: BTreeMap<String, String>,
    pub rows: Vec<Row>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T>(x: Option<T>, f: impl Fn(T) -> String) -> String {
    x.map(f).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record([
            r.preset.clone(),
            r.model.clone(),
            num(r.alpha),
            r.algorithm.clone(),
            r.param_name.clone().unwrap_or_default(),
            opt(r.param_value, num),
            num(r.var),
            num(r.cvar),
            opt(r.var_abs_err, num),
            opt(r.cvar_abs_err, num),
            num(r.rel_time),
            opt(r.n_grid, |n| n.to_string()),
            num(r.nu),
            num(r.wall_ms),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<Row>, CliError> {
    let mut rd = csv::Reader::from_reader(input);
    let bad = |m: String| CliError::Io(format!("malformed csv: {m}"));
    let header: Vec<String> = rd.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
    if header != COLUMNS {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let f = |i: usize| -> Result<f64, CliError> { rec[i].parse().map_err(|_| bad(format!("{}: '{}'", COLUMNS[i], &rec[i]))) };
        let of = |i: usize| -> Result<Option<f64>, CliError> { if rec[i].is_empty() { Ok(None) } else { f(i).map(Some) } };
        let text = |i: usize| if rec[i].is_empty() { None } else { Some(rec[i].to_string()) };
        rows.push(Row {
            preset: rec[0].to_string(),
            model: rec[1].to_string(),
            alpha: f(2)?,
            algorithm: rec[3].to_string(),
            param_name: text(4),
            param_value: of(5)?,
            var: f(6)?,
            cvar: f(7)?,
            var_abs_err: of(8)?,
            cvar_abs_err: of(9)?,
            rel_time: f(10)?,
            n_grid: text(11).map(|s| s.parse().map_err(|_| bad(format!("n_grid: '{s}'")))).transpose()?,
            nu: f(12)?,
            wall_ms: f(13)?,
        });
    }
    Ok(rows)
}

pub fn write_json<W: Write>(report: &Report, mut out: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, report).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}
