//! Flat `key = value` run configuration, one pair per line, `#` comments.

use std::path::{Path, PathBuf};

use hermite_riesz::normlab::Operator;
use hermite_riesz::report::ReportFormat;
use hermite_riesz::suites::SuiteConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("config line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: bad value for {key}: {message}")]
    Value { line: usize, key: String, message: String },
    #[error("HERMITE_RIESZ_THREADS must be a positive integer, got {0:?}")]
    Threads(String),
}

/// Every field is optional so that command-line flags can be layered on top.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub dims: Option<Vec<usize>>,
    pub exponents: Option<Vec<f64>>,
    pub degree: Option<u32>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub rel_tol: Option<f64>,
    pub ops: Option<Vec<Operator>>,
    pub output: Option<PathBuf>,
    pub format: Option<ReportFormat>,
}

fn list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

fn one<T: std::str::FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("{value:?}: {e}"))
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) =
                body.split_once('=').ok_or_else(|| ConfigError::Syntax { line, text: raw.to_string() })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let bad = |message: String| ConfigError::Value { line, key: key.clone(), message };
            match key.as_str() {
                "dims" => s.dims = Some(list(value).map_err(bad)?),
                "p" | "exponents" => s.exponents = Some(list(value).map_err(bad)?),
                "degree" => s.degree = Some(one(value).map_err(bad)?),
                "samples" => s.samples = Some(one(value).map_err(bad)?),
                "seed" => s.seed = Some(one(value).map_err(bad)?),
                "rel_tol" => s.rel_tol = Some(one(value).map_err(bad)?),
                "op" | "ops" => s.ops = Some(list(value).map_err(bad)?),
                "output" => s.output = Some(PathBuf::from(value)),
                "format" => s.format = Some(one(value).map_err(bad)?),
                _ => return Err(ConfigError::UnknownKey { line, key }),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// Values set in `over` win.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            dims: over.dims.or(self.dims),
            exponents: over.exponents.or(self.exponents),
            degree: over.degree.or(self.degree),
            samples: over.samples.or(self.samples),
            seed: over.seed.or(self.seed),
            rel_tol: over.rel_tol.or(self.rel_tol),
            ops: over.ops.or(self.ops),
            output: over.output.or(self.output),
            format: over.format.or(self.format),
        }
    }

    pub fn suite_config(&self) -> SuiteConfig {
        let d = SuiteConfig::default();
        SuiteConfig {
            dims: self.dims.clone().unwrap_or(d.dims),
            exponents: self.exponents.clone().unwrap_or(d.exponents),
            degree: self.degree.unwrap_or(d.degree),
            samples: self.samples.unwrap_or(d.samples),
            seed: self.seed.unwrap_or(d.seed),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            ops: self.ops.clone().unwrap_or(d.ops),
        }
    }
}

pub fn thread_count(var: Option<String>) -> Result<Option<usize>, ConfigError> {
    match var {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError::Threads(v)),
        },
    }
}
