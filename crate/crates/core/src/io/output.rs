//! CSV and JSON writers.
//!
//! Schemas:
//! - test result: `statistic, p_value, B, seed, method, alpha, reject`
//! - power table: `delta, rejections, replications, power, se`, followed by
//!   `on_rejections, on_power, on_se` when an oracle null was used
//! - p-value matrix: CSV with class names as header row and first column;
//!   JSON `{classes, p_values}`
//! - null sample: CSV column `statistic`; JSON `{method, seed, B, statistics}`
//!
//! Reals in CSV are printed with 17 significant digits so they read back bit
//! for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::pairwise::PvalueMatrix;
use crate::error::{Error, Result};
use crate::resample::{NullSample, TestResult};
use crate::simgen::{PowerRow, PowerTable, RateEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// Picks the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidArgument(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Artifact<'a> {
    Test(&'a TestResult),
    Power(&'a PowerTable),
    Pvalues(&'a PvalueMatrix),
    Null(&'a NullSample),
}

/// Flat power-table row as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRecord {
    pub delta: f64,
    pub rejections: usize,
    pub replications: usize,
    pub power: f64,
    pub se: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub on_rejections: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub on_power: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub on_se: Option<f64>,
}

impl From<&PowerRow> for PowerRecord {
    fn from(row: &PowerRow) -> Self {
        let rn = row.randomization;
        Self {
            delta: row.delta,
            rejections: rn.rejections,
            replications: rn.replications,
            power: rn.power,
            se: rn.se,
            on_rejections: row.oracle.map(|o| o.rejections),
            on_power: row.oracle.map(|o| o.power),
            on_se: row.oracle.map(|o| o.se),
        }
    }
}

impl PowerRecord {
    fn into_row(self) -> PowerRow {
        PowerRow {
            delta: self.delta,
            randomization: RateEstimate {
                rejections: self.rejections,
                replications: self.replications,
                power: self.power,
                se: self.se,
            },
            oracle: match (self.on_rejections, self.on_power, self.on_se) {
                (Some(rejections), Some(power), Some(se)) => Some(RateEstimate {
                    rejections,
                    replications: self.replications,
                    power,
                    se,
                }),
                _ => None,
            },
        }
    }
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes `artifact` to a string.
pub fn render(artifact: Artifact<'_>, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&to_json(artifact))?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => Ok(to_csv(artifact)),
    }
}

/// Writes `artifact` to `path`.
pub fn write_results(
    artifact: Artifact<'_>,
    path: impl AsRef<Path>,
    format: OutputFormat,
) -> Result<()> {
    let path = path.as_ref();
    let text = render(artifact, format)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn to_json(artifact: Artifact<'_>) -> serde_json::Value {
    match artifact {
        Artifact::Test(r) => json!({
            "statistic": r.statistic,
            "p_value": r.p_value,
            "B": r.null.len(),
            "seed": r.null.seed,
            "method": r.null.method.name(),
            "alpha": r.alpha,
            "reject": r.reject,
        }),
        Artifact::Power(t) => {
            let rows: Vec<PowerRecord> = t.rows.iter().map(PowerRecord::from).collect();
            json!(rows)
        }
        Artifact::Pvalues(m) => json!({
            "classes": m.classes,
            "p_values": (0..m.len()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>(),
        }),
        Artifact::Null(s) => json!({
            "method": s.method.name(),
            "seed": s.seed,
            "B": s.len(),
            "statistics": s.statistics,
        }),
    }
}

fn to_csv(artifact: Artifact<'_>) -> String {
    let mut out = String::new();
    let mut line = |fields: Vec<String>| {
        out.push_str(&fields.join(","));
        out.push('\n');
    };
    match artifact {
        Artifact::Test(r) => {
            line(
                [
                    "statistic",
                    "p_value",
                    "B",
                    "seed",
                    "method",
                    "alpha",
                    "reject",
                ]
                .map(String::from)
                .to_vec(),
            );
            line(vec![
                real(r.statistic),
                real(r.p_value),
                r.null.len().to_string(),
                r.null.seed.to_string(),
                r.null.method.name().to_string(),
                real(r.alpha),
                r.reject.to_string(),
            ]);
        }
        Artifact::Power(t) => {
            let with_oracle = t.rows.iter().any(|r| r.oracle.is_some());
            let mut header = vec!["delta", "rejections", "replications", "power", "se"];
            if with_oracle {
                header.extend(["on_rejections", "on_power", "on_se"]);
            }
            line(header.into_iter().map(String::from).collect());
            for row in &t.rows {
                let rn = row.randomization;
                let mut fields = vec![
                    real(row.delta),
                    rn.rejections.to_string(),
                    rn.replications.to_string(),
                    real(rn.power),
                    real(rn.se),
                ];
                if with_oracle {
                    match row.oracle {
                        Some(on) => {
                            fields.extend([on.rejections.to_string(), real(on.power), real(on.se)])
                        }
                        None => fields.extend([String::new(), String::new(), String::new()]),
                    }
                }
                line(fields);
            }
        }
        Artifact::Pvalues(m) => {
            line(
                std::iter::once("class".to_string())
                    .chain(m.classes.iter().cloned())
                    .collect(),
            );
            for (i, class) in m.classes.iter().enumerate() {
                line(
                    std::iter::once(class.clone())
                        .chain(m.row(i).iter().map(|&p| real(p)))
                        .collect(),
                );
            }
        }
        Artifact::Null(s) => {
            line(vec!["statistic".to_string()]);
            for &v in &s.statistics {
                line(vec![real(v)]);
            }
        }
    }
    out
}

/// Reads a power table written by [`write_results`] in either format.
pub fn read_power_table(path: impl AsRef<Path>) -> Result<PowerTable> {
    let path = path.as_ref();
    let records: Vec<PowerRecord> = match OutputFormat::from_path(path) {
        OutputFormat::Json => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&text)?
        }
        OutputFormat::Csv => {
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            csv::Reader::from_reader(file)
                .deserialize()
                .collect::<std::result::Result<_, _>>()?
        }
    };
    Ok(PowerTable {
        rows: records.into_iter().map(PowerRecord::into_row).collect(),
    })
}
