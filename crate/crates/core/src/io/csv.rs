//! Long-format CSV of a [`PatternGrid`] with a `#` provenance preamble.
//!
//! ```text
//! # eii 0.1.0
//! # spec {...}
//! # n_max 57
//! # general_balance_cells 0
//! # clamp_events 0
//! # nan_cells 1
//! # nan {"i_eps":0,"i_amp":1,"reason":"..."}
//! eps0_ghz_over_2pi,amp_ghz_over_2pi,p00
//! 0,0,0.5
//! 0,0.025,nan
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::{Axis, CellFailure, PatternGrid, SweepSpec};

pub const CSV_HEADER: &str = "eps0_ghz_over_2pi,amp_ghz_over_2pi,p00";

fn number(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

/// Cells with a finite value outside `[0, 1]`.
pub fn clamp_events(grid: &PatternGrid) -> usize {
    grid.values
        .iter()
        .filter(|v| !v.is_nan() && !(0.0..=1.0).contains(*v))
        .count()
}

pub fn render_csv(grid: &PatternGrid) -> Result<String> {
    let mut s = String::new();
    let p = &grid.provenance;
    let json = |e: serde_json::Error| Error::Integration(format!("serialization: {e}"));
    writeln!(s, "# eii {}", p.version).unwrap();
    if let Some(spec) = &p.spec {
        writeln!(s, "# spec {}", serde_json::to_string(spec).map_err(json)?).unwrap();
    }
    writeln!(s, "# n_max {}", p.n_max).unwrap();
    writeln!(s, "# general_balance_cells {}", p.general_balance_cells).unwrap();
    writeln!(s, "# clamp_events {}", clamp_events(grid)).unwrap();
    writeln!(s, "# nan_cells {}", grid.failures.len()).unwrap();
    for f in &grid.failures {
        writeln!(s, "# nan {}", serde_json::to_string(f).map_err(json)?).unwrap();
    }
    let mut w = csv::Writer::from_writer(s.into_bytes());
    w.write_record(CSV_HEADER.split(',')).map_err(io_err)?;
    for i in 0..grid.n_eps() {
        let eps = number(grid.eps_axis.value(i));
        for j in 0..grid.n_amp() {
            w.write_record([eps.as_str(), &number(grid.amp_axis.value(j)), &number(grid.get(i, j))])
                .map_err(io_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn write_csv(grid: &PatternGrid, path: &Path) -> Result<()> {
    fs::write(path, render_csv(grid)?)?;
    Ok(())
}

fn io_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidParameter(format!("csv line {line}: {msg}"))
}

fn parse_number(field: &str, line: usize) -> Result<f64> {
    if field == "nan" {
        return Ok(f64::NAN);
    }
    field.parse().map_err(|_| bad(line, format!("bad number `{field}`")))
}

fn axis_from(values: &[f64], line: usize) -> Result<Axis> {
    if values.len() < 2 {
        return Err(bad(line, "axis needs at least two values"));
    }
    Ok(Axis::new(values[0], values[values.len() - 1], values.len()))
}

/// Parses text produced by [`render_csv`].
pub fn parse_csv(text: &str) -> Result<PatternGrid> {
    let mut spec: Option<SweepSpec> = None;
    let mut n_max = 0;
    let mut general = 0;
    let mut version = String::new();
    let mut failures = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let Some(meta) = raw.strip_prefix("# ") else { continue };
        let (key, rest) = meta.split_once(' ').unwrap_or((meta, ""));
        match key {
            "eii" => version = rest.to_string(),
            "spec" => spec = Some(serde_json::from_str(rest).map_err(|e| bad(line, e))?),
            "n_max" => n_max = rest.parse().map_err(|e| bad(line, e))?,
            "general_balance_cells" => general = rest.parse().map_err(|e| bad(line, e))?,
            "nan" => failures.push(serde_json::from_str::<CellFailure>(rest).map_err(|e| bad(line, e))?),
            _ => {}
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(0, e))?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(bad(0, "missing header"));
    }
    let mut eps: Vec<f64> = Vec::new();
    let mut amp: Vec<f64> = Vec::new();
    let mut values = Vec::new();
    let mut last = 0;
    for record in reader.records() {
        let record = record.map_err(|e| bad(last, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        last = line;
        if record.len() != 3 {
            return Err(bad(line, "expected three fields"));
        }
        let e = parse_number(&record[0], line)?;
        let a = parse_number(&record[1], line)?;
        if eps.last().is_none_or(|&x| x.to_bits() != e.to_bits()) {
            eps.push(e);
        }
        if eps.len() == 1 {
            amp.push(a);
        } else if amp.get(values.len() % amp.len().max(1)).map(|x| x.to_bits()) != Some(a.to_bits()) {
            return Err(bad(line, "rows are not eps-major over a fixed amplitude axis"));
        }
        values.push(parse_number(&record[2], line)?);
    }
    let eps_axis = axis_from(&eps, last)?;
    let amp_axis = axis_from(&amp, last)?;
    let mut grid = PatternGrid::from_values(eps_axis, amp_axis, values)?;
    grid.failures = failures;
    grid.provenance.spec = spec;
    grid.provenance.n_max = n_max;
    grid.provenance.general_balance_cells = general;
    if !version.is_empty() {
        grid.provenance.version = version;
    }
    Ok(grid)
}

pub fn read_csv(path: &Path) -> Result<PatternGrid> {
    parse_csv(&fs::read_to_string(path)?)
}
