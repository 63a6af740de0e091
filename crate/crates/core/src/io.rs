//! Plot-ready CSV tables. Files are UTF-8 with LF line endings; floats are
//! written with 12 significant digits.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use csv::{ReaderBuilder, Terminator, WriterBuilder};

use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::geometry::{Placement, SampledFunction};
use crate::variational::OptimizerTrace;

/// Formats like C's `%.12g`.
///
/// ```
/// use adf_core::io::format_float;
/// assert_eq!(format_float(0.1 + 0.2), "0.3");
/// assert_eq!(format_float(1234567.0), "1234567");
/// assert_eq!(format_float(2.5e-7), "2.5e-07");
/// assert_eq!(format_float(-1e15), "-1e+15");
/// ```
pub fn format_float(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        let fixed = format!("{:.*}", (DIGITS - 1 - exp).max(0) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to the value [`format_float`] prints.
pub fn round_sig(x: f64) -> f64 {
    format_float(x).parse().unwrap_or(x)
}

pub(crate) fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

pub(crate) fn csv_error(path: &Path, source: csv::Error) -> Error {
    Error::Csv { path: path.to_path_buf(), source }
}

/// Writes `header` and `rows` as CSV.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> csv::Result<()> {
    let mut w = WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// [`write_table`] into a file.
pub fn write_table_to(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    write_table(file, header, rows).map_err(|e| csv_error(path, e))
}

pub fn placement_rows(p: &Placement) -> Vec<Vec<String>> {
    p.positions().iter().enumerate().map(|(i, x)| vec![(i + 1).to_string(), format_float(*x)]).collect()
}

pub const PLACEMENT_HEADER: [&str; 2] = ["index", "p"];
pub const CURVE_HEADER: [&str; 3] = ["index", "x", "y"];
pub const ADF_HEADER: [&str; 3] = ["index", "p", "w"];
pub const CHANNEL_HEADER: [&str; 4] = ["n", "m", "re", "im"];
pub const TRACE_HEADER: [&str; 3] = ["iteration", "rate", "delta_norm"];

pub fn write_placement(path: &Path, p: &Placement) -> Result<()> {
    write_table_to(path, &PLACEMENT_HEADER, placement_rows(p))
}

pub fn curve_rows(points: &[(f64, f64)]) -> Vec<Vec<String>> {
    points.iter().enumerate().map(|(i, (x, y))| vec![(i + 1).to_string(), format_float(*x), format_float(*y)]).collect()
}

pub fn adf_rows(w: &SampledFunction) -> Vec<Vec<String>> {
    w.nodes()
        .iter()
        .zip(w.values())
        .enumerate()
        .map(|(i, (p, v))| vec![i.to_string(), format_float(*p), format_float(*v)])
        .collect()
}

pub fn channel_rows(h: &ChannelMatrix) -> Vec<Vec<String>> {
    let e = h.entries();
    (0..h.n())
        .flat_map(|n| {
            (0..h.m()).map(move |m| {
                let z = e[(n, m)];
                vec![(n + 1).to_string(), (m + 1).to_string(), format_float(z.re), format_float(z.im)]
            })
        })
        .collect()
}

pub fn trace_rows(trace: &OptimizerTrace) -> Vec<Vec<String>> {
    trace
        .records
        .iter()
        .map(|r| vec![r.iteration.to_string(), format_float(r.rate), format_float(r.delta_norm)])
        .collect()
}

pub fn write_curve(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    write_table_to(path, &CURVE_HEADER, curve_rows(points))
}

pub fn write_adf(path: &Path, w: &SampledFunction) -> Result<()> {
    write_table_to(path, &ADF_HEADER, adf_rows(w))
}

pub fn write_channel(path: &Path, h: &ChannelMatrix) -> Result<()> {
    write_table_to(path, &CHANNEL_HEADER, channel_rows(h))
}

pub fn write_trace(path: &Path, trace: &OptimizerTrace) -> Result<()> {
    write_table_to(path, &TRACE_HEADER, trace_rows(trace))
}

/// Reads positions from a CSV with a `p` column, or from one position per
/// line when there is no header.
pub fn read_placement<R: Read>(input: R) -> Result<Placement> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text).map_err(|e| Error::invalid(format!("cannot read placement: {e}")))?;
    let mut rdr = ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = rdr.records();
    let first = match rows.next() {
        Some(r) => r.map_err(|e| Error::invalid(format!("placement CSV: {e}")))?,
        None => return Err(Error::invalid("placement file is empty")),
    };
    let column = first.iter().position(|h| h == "p");
    let mut positions = Vec::new();
    let parse = |s: &str| s.parse::<f64>().map_err(|_| Error::invalid(format!("bad position '{s}'")));
    match column {
        Some(_) => {}
        None => positions.push(parse(first.get(first.len() - 1).unwrap_or(""))?),
    }
    for row in rows {
        let row = row.map_err(|e| Error::invalid(format!("placement CSV: {e}")))?;
        let field = match column {
            Some(c) => row.get(c),
            None => row.get(row.len().saturating_sub(1)),
        };
        positions.push(parse(field.unwrap_or(""))?);
    }
    Placement::new(positions)
}

pub fn read_placement_from(path: &Path) -> Result<Placement> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    read_placement(file).map_err(|e| e.context(path.display().to_string()))
}
