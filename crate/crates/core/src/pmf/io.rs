//! CSV and JSON ingestion.
//!
//! Both formats carry `label → number` pairs. If every number is an integer
//! literal the input is read as counts, otherwise as probabilities.

use std::str::FromStr;

use serde_json::Value;

use super::{Pmf, DEFAULT_NORMALIZATION_TOLERANCE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Json,
    Auto,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "auto" => Ok(Self::Auto),
            other => Err(Error::Parse(format!("unknown input format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReadOptions {
    pub normalize: bool,
    pub tolerance: f64,
}

impl Default for ReadOptions {
    fn default() -> Self {
        Self {
            normalize: false,
            tolerance: DEFAULT_NORMALIZATION_TOLERANCE,
        }
    }
}

enum Number {
    Int(i64),
    Real(f64),
}

pub fn parse(text: &str, format: InputFormat, opts: ReadOptions) -> Result<Pmf> {
    match format {
        InputFormat::Csv => parse_csv(text, opts),
        InputFormat::Json => parse_json(text, opts),
        InputFormat::Auto => {
            if text.trim_start().starts_with('{') {
                parse_json(text, opts)
            } else {
                parse_csv(text, opts)
            }
        }
    }
}

/// Lines of `label,count` or `label,probability`. A leading header row whose
/// second column is not numeric is skipped; `#` starts a comment line.
pub fn parse_csv(text: &str, opts: ReadOptions) -> Result<Pmf> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse(format!(
                "line {}: expected `label,number`, got {} fields",
                row + 1,
                record.len()
            )));
        }
        let label = record[0].to_string();
        let raw = &record[1];
        let number = match parse_number(raw) {
            Some(n) => n,
            None if row == 0 && entries.is_empty() => continue,
            None => {
                return Err(Error::Parse(format!("line {}: {raw:?} is not a number", row + 1)))
            }
        };
        entries.push((label, number));
    }
    build(entries, opts)
}

/// An object mapping label to number, in file order.
pub fn parse_json(text: &str, opts: ReadOptions) -> Result<Pmf> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object of label -> number".into()))?;
    let mut entries = Vec::with_capacity(obj.len());
    for (label, v) in obj {
        let n = v
            .as_number()
            .ok_or_else(|| Error::Parse(format!("value for {label:?} is not a number")))?;
        let number = match n.as_i64() {
            Some(i) => Number::Int(i),
            None => Number::Real(
                n.as_f64()
                    .ok_or_else(|| Error::Parse(format!("value for {label:?} out of range")))?,
            ),
        };
        entries.push((label.clone(), number));
    }
    build(entries, opts)
}

fn parse_number(raw: &str) -> Option<Number> {
    if let Ok(i) = raw.parse::<i64>() {
        return Some(Number::Int(i));
    }
    raw.parse::<f64>().ok().map(Number::Real)
}

fn build(entries: Vec<(String, Number)>, opts: ReadOptions) -> Result<Pmf> {
    if entries.is_empty() {
        return Err(Error::Parse("no `label,number` entries found".into()));
    }
    if entries.iter().all(|(_, n)| matches!(n, Number::Int(_))) {
        let counts = entries.into_iter().map(|(l, n)| match n {
            Number::Int(i) => (l, i),
            Number::Real(_) => unreachable!(),
        });
        return Pmf::from_counts(counts);
    }
    let atoms = entries.into_iter().map(|(l, n)| {
        let p = match n {
            Number::Int(i) => i as f64,
            Number::Real(x) => x,
        };
        (l, p)
    });
    if opts.normalize {
        Pmf::renormalized(atoms)
    } else {
        Pmf::with_tolerance(atoms, opts.tolerance)
    }
}
