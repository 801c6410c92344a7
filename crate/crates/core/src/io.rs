//! File formats: single-column data files, covariance-profile CSV, and the
//! versioned JSON report document.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::montecarlo::{MonteCarloReport, TailTable};
use crate::series::TimeSeries;
use crate::testing::TestReport;
use crate::varest::AutocovarianceProfile;

pub const SCHEMA_VERSION: &str = "mwdep-report/1";

/// 17 significant digits; parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses one number per line. Blank lines are skipped and the first nonblank
/// line may be a non-numeric header. Line numbers in errors are 1-based.
pub fn parse_column(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let first = !seen_content;
        seen_content = true;
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("non-finite value '{line}'"),
                })
            }
            // a header is only allowed before any data
            Err(_) if first => continue,
            Err(_) => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("not a number: '{line}'"),
                })
            }
        }
    }
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(values)
}

pub fn read_column(path: &Path) -> Result<TimeSeries<f64>> {
    let text = std::fs::read_to_string(path)?;
    TimeSeries::new(parse_column(&text)?)
}

pub fn format_column(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 24);
    for &v in values {
        out.push_str(&fmt_f64(v));
        out.push('\n');
    }
    out
}

/// Covariance plot data: one row per lag.
#[derive(Debug, Clone, PartialEq)]
pub struct CovTable {
    pub gamma_x: Vec<f64>,
    pub gamma_y: Option<Vec<f64>>,
    /// `2/sqrt(len)` of the shorter series
    pub band: f64,
}

impl CovTable {
    pub fn from_profiles(x: &AutocovarianceProfile<f64>, y: Option<&AutocovarianceProfile<f64>>) -> Result<Self> {
        if let Some(y) = y {
            if y.max_lag() != x.max_lag() {
                return Err(Error::Format("profiles must cover the same lags".into()));
            }
        }
        let band = y.map_or(x.band(), |y| x.band().max(y.band()));
        Ok(Self {
            gamma_x: x.gamma().to_vec(),
            gamma_y: y.map(|p| p.gamma().to_vec()),
            band,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(match self.gamma_y {
            Some(_) => "lag,gamma_x,gamma_y,band\n",
            None => "lag,gamma_x,band\n",
        });
        for (lag, gx) in self.gamma_x.iter().enumerate() {
            let _ = write!(out, "{lag},{}", fmt_f64(*gx));
            if let Some(gy) = &self.gamma_y {
                let _ = write!(out, ",{}", fmt_f64(gy[lag]));
            }
            let _ = writeln!(out, ",{}", fmt_f64(self.band));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::EmptySample)?;
        let with_y = match header.trim() {
            "lag,gamma_x,gamma_y,band" => true,
            "lag,gamma_x,band" => false,
            other => return Err(Error::Parse { line: 1, message: format!("unexpected header '{other}'") }),
        };
        let mut gamma_x = Vec::new();
        let mut gamma_y = Vec::new();
        let mut band = None;
        for (idx, line) in lines {
            let bad = |message: String| Error::Parse { line: idx + 1, message };
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != if with_y { 4 } else { 3 } {
                return Err(bad(format!("wrong field count in '{line}'")));
            }
            let lag: usize = fields[0].parse().map_err(|_| bad(format!("bad lag '{}'", fields[0])))?;
            if lag != gamma_x.len() {
                return Err(bad(format!("expected lag {}, found {lag}", gamma_x.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("not a number: '{s}'")));
            gamma_x.push(num(fields[1])?);
            if with_y {
                gamma_y.push(num(fields[2])?);
            }
            band = Some(num(fields[fields.len() - 1])?);
        }
        Ok(Self {
            gamma_x,
            gamma_y: with_y.then_some(gamma_y),
            band: band.ok_or(Error::EmptySample)?,
        })
    }
}

/// Payload of a [`ReportDocument`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Payload {
    Test(TestReport<f64>),
    MonteCarlo(MonteCarloReport),
    Profile {
        x: AutocovarianceProfile<f64>,
        y: Option<AutocovarianceProfile<f64>>,
    },
    Tail(TailTable),
}

/// Versioned JSON envelope written by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_algorithm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub payload: Payload,
}

impl ReportDocument {
    pub fn new(command: Vec<String>, payload: Payload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command,
            inputs_digest: None,
            rng_algorithm: None,
            master_seed: None,
            payload,
        }
    }

    pub fn with_inputs(mut self, inputs: &[&[u8]]) -> Self {
        self.inputs_digest = Some(digest_inputs(inputs));
        self
    }

    pub fn with_rng(mut self, algorithm: &str, seed: u64) -> Self {
        self.rng_algorithm = Some(algorithm.to_string());
        self.master_seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported schema version '{}'",
                doc.schema_version
            )));
        }
        Ok(doc)
    }
}

/// `sha256:` + hex digest over the length-prefixed inputs.
pub fn digest_inputs(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}
