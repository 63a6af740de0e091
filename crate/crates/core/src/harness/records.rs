use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use csv::ReaderBuilder;

use crate::error::{Error, Result};
use crate::io::{csv_error, format_float, io_error, round_sig, write_table};

pub const RECORD_HEADER: [&str; 8] = ["scheme", "M", "z0", "alpha", "trial", "rate_bits", "wall_time_ms", "seed"];

/// One evaluated rate, keyed by `(scheme, M, z0, alpha, trial)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub scheme: String,
    pub m: usize,
    pub z0: f64,
    pub alpha: Option<f64>,
    pub trial: usize,
    pub rate_bits: f64,
    pub wall_time_ms: f64,
    pub seed: u64,
}

impl ResultRecord {
    pub fn key_cmp(a: &Self, b: &Self) -> Ordering {
        let alpha = |r: &Self| r.alpha.unwrap_or(f64::NEG_INFINITY);
        a.scheme
            .cmp(&b.scheme)
            .then(a.m.cmp(&b.m))
            .then(a.z0.total_cmp(&b.z0))
            .then(alpha(a).total_cmp(&alpha(b)))
            .then(a.trial.cmp(&b.trial))
    }

    /// The record with floats rounded as they would be written.
    pub fn rounded(&self) -> Self {
        Self {
            z0: round_sig(self.z0),
            alpha: self.alpha.map(round_sig),
            rate_bits: round_sig(self.rate_bits),
            wall_time_ms: round_sig(self.wall_time_ms),
            ..self.clone()
        }
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.scheme.clone(),
            self.m.to_string(),
            format_float(self.z0),
            self.alpha.map(format_float).unwrap_or_default(),
            self.trial.to_string(),
            format_float(self.rate_bits),
            format_float(self.wall_time_ms),
            self.seed.to_string(),
        ]
    }
}

/// Writes records as CSV.
pub fn emit_records<W: Write>(records: &[ResultRecord], out: W) -> csv::Result<()> {
    write_table(out, &RECORD_HEADER, records.iter().map(ResultRecord::row))
}

pub fn emit_records_to(records: &[ResultRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    emit_records(records, file).map_err(|e| csv_error(path, e))
}

/// Parses CSV produced by [`emit_records`].
pub fn parse_records<R: Read>(input: R) -> Result<Vec<ResultRecord>> {
    let mut rdr = ReaderBuilder::new().from_reader(input);
    let header = rdr.headers().map_err(|e| Error::invalid(format!("record CSV: {e}")))?;
    if header.iter().ne(RECORD_HEADER.iter().copied()) {
        return Err(Error::invalid(format!(
            "unexpected record header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::invalid(format!("record CSV: {e}")))?;
        let bad = |field: &str| Error::invalid(format!("record {}: bad {field}", line + 1));
        let f = |i: usize, name: &str| row[i].parse::<f64>().map_err(|_| bad(name));
        out.push(ResultRecord {
            scheme: row[0].to_string(),
            m: row[1].parse().map_err(|_| bad("M"))?,
            z0: f(2, "z0")?,
            alpha: if row[3].is_empty() { None } else { Some(f(3, "alpha")?) },
            trial: row[4].parse().map_err(|_| bad("trial"))?,
            rate_bits: f(5, "rate_bits")?,
            wall_time_ms: f(6, "wall_time_ms")?,
            seed: row[7].parse().map_err(|_| bad("seed"))?,
        });
    }
    Ok(out)
}

pub fn parse_records_from(path: &Path) -> Result<Vec<ResultRecord>> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    parse_records(file).map_err(|e| e.context(path.display().to_string()))
}

/// Grouping used by [`aggregate_cdf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfKey {
    /// One curve per scheme label (and α).
    Scheme,
    /// One curve per scheme, `M`, `z0` and `α`.
    SchemePoint,
}

impl CdfKey {
    fn of(self, r: &ResultRecord) -> String {
        let alpha = r.alpha.map(|a| format!(" alpha={}", format_float(a))).unwrap_or_default();
        match self {
            CdfKey::Scheme => format!("{}{alpha}", r.scheme),
            CdfKey::SchemePoint => format!("{} M={} z0={}{alpha}", r.scheme, r.m, format_float(r.z0)),
        }
    }
}

/// Empirical CDF of one group: `(rate, fraction ≤ rate)` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    pub key: String,
    pub points: Vec<(f64, f64)>,
}

impl CdfTable {
    /// Smallest rate whose fraction reaches `q`.
    pub fn quantile(&self, q: f64) -> f64 {
        self.points.iter().find(|(_, f)| *f >= q - 1e-12).map_or(f64::NAN, |(r, _)| *r)
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }
}

/// Sorted empirical CDFs, one per group, ordered by key.
///
/// ```
/// use adf_core::harness::{aggregate_cdf, CdfKey, ResultRecord};
/// let r = |rate| ResultRecord { scheme: "ula".into(), m: 4, z0: 3.0, alpha: None, trial: 0,
///     rate_bits: rate, wall_time_ms: 0.0, seed: 0 };
/// let cdf = aggregate_cdf(&[r(2.0), r(2.0)], CdfKey::Scheme).unwrap();
/// assert_eq!(cdf[0].points, vec![(2.0, 0.5), (2.0, 1.0)]);
/// ```
pub fn aggregate_cdf(records: &[ResultRecord], key: CdfKey) -> Result<Vec<CdfTable>> {
    if records.is_empty() {
        return Err(Error::invalid("no records to aggregate"));
    }
    let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in records {
        groups.entry(key.of(r)).or_default().push(r.rate_bits);
    }
    Ok(groups
        .into_iter()
        .map(|(key, mut rates)| {
            rates.sort_by(f64::total_cmp);
            let n = rates.len() as f64;
            let points = rates.into_iter().enumerate().map(|(i, r)| (r, (i + 1) as f64 / n)).collect();
            CdfTable { key, points }
        })
        .collect())
}

pub const CDF_HEADER: [&str; 3] = ["key", "rate_bits", "fraction"];

pub fn emit_cdf<W: Write>(tables: &[CdfTable], out: W) -> csv::Result<()> {
    let rows = tables
        .iter()
        .flat_map(|t| t.points.iter().map(|(r, f)| vec![t.key.clone(), format_float(*r), format_float(*f)]));
    write_table(out, &CDF_HEADER, rows)
}
