//! Loss-matrix ingestion and report serialization for the command line.
//!
//! Reports use one-based model indices. In CSV, set members are joined with
//! `;` and absent optional fields are left empty.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::argmin_test::TestOutcome;
use crate::confidence_sets::{IndexSet, Interval};
use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::sim::MCResult;

/// A loss matrix: rows are evaluation points, columns are models.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub sample: Sample,
    /// Header names, when the file has a header row.
    pub names: Option<Vec<String>>,
}

impl Matrix {
    fn name(&self, k: usize) -> Option<String> {
        self.names.as_ref().map(|names| names[k].clone())
    }
}

pub fn load_matrix(path: &Path) -> Result<Matrix> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::input(format!("cannot open {}: {e}", path.display())))?;
    read_matrix(file)
}

/// Parses a rectangular CSV of finite numbers. The first row is a header
/// when any of its cells is not a number.
pub fn read_matrix<R: Read>(reader: R) -> Result<Matrix> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut names = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (i, record) in csv.records().enumerate() {
        let record = record.map_err(|e| Error::input(format!("malformed csv: {e}")))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if width.is_some_and(|w| w != record.len()) {
            return Err(Error::input(format!(
                "line {line}: expected {} fields, found {}",
                width.unwrap_or_default(),
                record.len()
            )));
        }
        width = Some(record.len());
        let parsed: Vec<Option<f64>> = record.iter().map(|cell| cell.parse::<f64>().ok()).collect();
        if i == 0 && parsed.iter().any(Option::is_none) {
            names = Some(record.iter().map(str::to_string).collect());
            continue;
        }
        let mut row = Vec::with_capacity(parsed.len());
        for (k, (value, cell)) in parsed.into_iter().zip(record.iter()).enumerate() {
            match value {
                Some(v) if v.is_finite() => row.push(v),
                _ => {
                    return Err(Error::input(format!(
                        "line {line}, column {}: '{cell}' is not a finite number",
                        k + 1
                    )))
                }
            }
        }
        rows.push(row);
    }
    let d = width.unwrap_or(0);
    if rows.len() < 4 {
        return Err(Error::input(format!("need at least 4 data rows, found {}", rows.len())));
    }
    if d < 2 {
        return Err(Error::input(format!("need at least 2 columns, found {d}")));
    }
    Ok(Matrix { sample: Sample::from_rows(&rows)?, names })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub r: usize,
    pub alpha: f64,
    #[serde(with = "crate::serde_float")]
    pub statistic: f64,
    #[serde(with = "crate::serde_float")]
    pub threshold: f64,
    pub p_value: f64,
    pub selected: usize,
    pub selected_name: Option<String>,
    pub reject: bool,
    pub seed: u64,
}

impl TestReport {
    /// `r` is zero-based; the report is one-based.
    pub fn new(matrix: &Matrix, r: usize, outcome: &TestOutcome) -> Self {
        Self {
            r: r + 1,
            alpha: outcome.alpha,
            statistic: outcome.statistic,
            threshold: outcome.threshold,
            p_value: outcome.p_value,
            selected: outcome.selected + 1,
            selected_name: matrix.name(outcome.selected),
            reject: outcome.reject,
            seed: outcome.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetReport {
    pub method: String,
    pub alpha: f64,
    pub members: Vec<usize>,
    pub names: Option<Vec<String>>,
    pub d_hat: Option<usize>,
    pub seed: u64,
}

impl SetReport {
    pub fn new(matrix: &Matrix, method: &str, alpha: f64, set: &IndexSet, seed: u64) -> Self {
        Self {
            method: method.to_string(),
            alpha,
            members: set.members().iter().map(|k| k + 1).collect(),
            names: matrix
                .names
                .as_ref()
                .map(|names| set.members().iter().map(|&k| names[k].clone()).collect()),
            d_hat: None,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub method: String,
    pub alpha: f64,
    pub lo: f64,
    pub hi: f64,
    pub d_hat: Option<usize>,
}

impl IntervalReport {
    pub fn new(method: &str, alpha: f64, interval: Interval, d_hat: Option<usize>) -> Self {
        Self { method: method.to_string(), alpha, lo: interval.lo, hi: interval.hi, d_hat }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Test(TestReport),
    Set(SetReport),
    Interval(IntervalReport),
    Simulation(Vec<MCResult>),
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn csv_rows<S: Serialize>(rows: impl IntoIterator<Item = S>) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    writer.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Serializes `report`. JSON output ends with a newline; CSV output has a
/// header row.
pub fn emit_report(report: &Report, format: Format) -> Result<Vec<u8>> {
    let json = |value: serde_json::Result<String>| {
        value.map(|s| (s + "\n").into_bytes()).map_err(|e| Error::Io(e.into()))
    };
    match (report, format) {
        (Report::Test(r), Format::Json) => json(serde_json::to_string_pretty(r)),
        (Report::Set(r), Format::Json) => json(serde_json::to_string_pretty(r)),
        (Report::Interval(r), Format::Json) => json(serde_json::to_string_pretty(r)),
        (Report::Simulation(r), Format::Json) => json(serde_json::to_string_pretty(r)),
        (Report::Test(r), Format::Csv) => csv_rows([r]),
        (Report::Set(r), Format::Csv) => {
            #[derive(Serialize)]
            struct Row<'a> {
                method: &'a str,
                alpha: f64,
                members: String,
                names: String,
                d_hat: Option<usize>,
                seed: u64,
            }
            csv_rows([Row {
                method: &r.method,
                alpha: r.alpha,
                members: join(&r.members),
                names: r.names.as_deref().map(join).unwrap_or_default(),
                d_hat: r.d_hat,
                seed: r.seed,
            }])
        }
        (Report::Interval(r), Format::Csv) => csv_rows([r]),
        (Report::Simulation(r), Format::Csv) => csv_rows(r),
    }
}
