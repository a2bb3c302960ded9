//! One line of verification output and its json/csv serialization.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed report: {0}")]
    Malformed(String),
    #[error("unknown format {0:?} (expected json or csv)")]
    Format(String),
}

/// `pass` is `computed <= bound + err`; identities are reported as
/// `computed = |error|` against `bound = tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claim: String,
    pub params: BTreeMap<String, String>,
    pub computed: f64,
    pub bound: f64,
    pub pass: bool,
    pub err: f64,
}

impl Report {
    pub fn new<I, K, V>(claim: impl Into<String>, params: I, computed: f64, bound: f64, err: f64) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: ToString,
    {
        let params = params.into_iter().map(|(k, v)| (k.into(), v.to_string())).collect();
        let pass = computed <= bound + err;
        Self { claim: claim.into(), params, computed, bound, pass, err }
    }

    /// Parameters as `k=v;k=v` in key order.
    pub fn params_text(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }

    fn sort_key(&self) -> (String, String) {
        (self.claim.clone(), self.params_text())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} ({}) computed={:e} bound={:e} err={:e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            self.params_text(),
            self.computed,
            self.bound,
            self.err
        )
    }
}

/// Canonical order: by claim, then by parameter text.
pub fn sort_reports(reports: &mut [Report]) {
    reports.sort_by_key(Report::sort_key);
}

pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(ReportError::Format(s.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    claim: String,
    params: String,
    computed: f64,
    bound: f64,
    pass: bool,
    err: f64,
}

pub fn serialize_reports(reports: &[Report], format: ReportFormat) -> Result<String, ReportError> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(reports)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(["claim", "params", "computed", "bound", "pass", "err"])?;
            for r in reports {
                w.serialize(CsvRow {
                    claim: r.claim.clone(),
                    params: r.params_text(),
                    computed: r.computed,
                    bound: r.bound,
                    pass: r.pass,
                    err: r.err,
                })?;
            }
            let bytes = w.into_inner().map_err(|e| ReportError::Io(e.into_error()))?;
            String::from_utf8(bytes).map_err(|e| ReportError::Malformed(e.to_string()))
        }
    }
}

pub fn parse_reports(text: &str, format: ReportFormat) -> Result<Vec<Report>, ReportError> {
    match format {
        ReportFormat::Json => Ok(serde_json::from_str(text)?),
        ReportFormat::Csv => {
            let mut rd = csv::Reader::from_reader(text.as_bytes());
            let mut out = Vec::new();
            for row in rd.deserialize() {
                let row: CsvRow = row?;
                let mut params = BTreeMap::new();
                for pair in row.params.split(';').filter(|s| !s.is_empty()) {
                    let (k, v) = pair.split_once('=').ok_or_else(|| ReportError::Malformed(pair.to_string()))?;
                    params.insert(k.to_string(), v.to_string());
                }
                out.push(Report {
                    claim: row.claim,
                    params,
                    computed: row.computed,
                    bound: row.bound,
                    pass: row.pass,
                    err: row.err,
                });
            }
            Ok(out)
        }
    }
}

pub fn write_report(reports: &[Report], format: ReportFormat, path: &Path) -> Result<(), ReportError> {
    std::fs::write(path, serialize_reports(reports, format)?)?;
    Ok(())
}
