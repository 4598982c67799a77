//! JSON config files and their merge with command-line flags.
//!
//! Test commands read a flat object:
//!
//! ```json
//! { "data": "x.csv", "scaling": "l1", "kernel": { "kind": "poly", "a": 4, "b": "p" },
//!   "B": 500, "alpha": 0.05, "seed": 7, "out": "result.json" }
//! ```
//!
//! Scenario commands read a scenario object as accepted by the library, plus
//! the optional keys `oracle` (simulate), `draws` (oracle), `out` and `format`.
//! Unknown keys are errors. Flags take precedence over file values.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gsign::simgen::{CovarianceSpec, Design, Distribution, MeanKind, MeanSpec, ScenarioSpec};
use gsign::{KernelSpec, ScalingKind, TestConfig};
use serde::de::{self, DeserializeOwned};
use serde::{Deserialize, Deserializer};
use serde_json::{Map, Value};

use crate::args::{Format, KernelKind, OutputArgs, ScenarioArgs, TestArgs};
use crate::error::{usage, CliError, Result};

pub const DEFAULT_RESAMPLES: usize = 1000;
pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_SCALING: ScalingKind = ScalingKind::L2;
pub const DEFAULT_OFFSET: f64 = 1.0;
pub const DEFAULT_DEGREE: u32 = 2;
pub const DEFAULT_REPLICATIONS: usize = 1000;
pub const DEFAULT_ORACLE_DRAWS: usize = 2000;

/// A kernel parameter: a number, or the data dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dim {
    Value(f64),
    P,
}

impl FromStr for Dim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim().eq_ignore_ascii_case("p") {
            return Ok(Dim::P);
        }
        s.trim()
            .parse()
            .map(Dim::Value)
            .map_err(|_| format!("expected a number or \"p\", got '{s}'"))
    }
}

impl<'de> Deserialize<'de> for Dim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_f64()
                .map(Dim::Value)
                .ok_or_else(|| de::Error::custom("kernel parameter out of range")),
            Value::String(s) => s.parse().map_err(de::Error::custom),
            other => Err(de::Error::custom(format!(
                "expected a number or \"p\", got {other}"
            ))),
        }
    }
}

impl Dim {
    fn offset(self, p: usize) -> f64 {
        match self {
            Dim::Value(v) => v,
            Dim::P => p as f64,
        }
    }

    fn degree(self, p: usize) -> Result<u32> {
        match self {
            Dim::P => u32::try_from(p).map_err(|_| usage(format!("degree p = {p} is too large"))),
            Dim::Value(v) if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => Ok(v as u32),
            Dim::Value(v) => Err(usage(format!(
                "kernel degree must be a positive integer, got {v}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelFile {
    pub kind: KernelKind,
    #[serde(default)]
    pub a: Option<Dim>,
    #[serde(default)]
    pub b: Option<Dim>,
}

/// Keys of a test-command config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFile {
    pub data: Option<PathBuf>,
    pub data1: Option<PathBuf>,
    pub data2: Option<PathBuf>,
    pub mu0: Option<PathBuf>,
    pub header: Option<bool>,
    pub label_column: Option<String>,
    pub score_column: Option<String>,
    pub quantile: Option<f64>,
    pub scaling: Option<ScalingKind>,
    pub threshold: Option<f64>,
    pub kernel: Option<KernelFile>,
    #[serde(rename = "B", alias = "resamples")]
    pub resamples: Option<usize>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn read_json(path: &Path) -> Result<Map<String, Value>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(config_error(path, "expected a JSON object")),
        Err(e) => Err(config_error(path, e)),
    }
}

fn config_error(path: &Path, message: impl ToString) -> CliError {
    CliError::Config {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

fn decode<T: DeserializeOwned>(path: &Path, value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| config_error(path, e))
}

/// Loads a test config, rejecting keys outside `allowed`.
pub fn load_test_file(path: Option<&Path>, allowed: &[&str]) -> Result<TestFile> {
    let Some(path) = path else {
        return Ok(TestFile::default());
    };
    let map = read_json(path)?;
    if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(config_error(path, format!("unknown key '{key}'")));
    }
    decode(path, Value::Object(map))
}

/// Test keys every test-command file accepts.
pub const TEST_KEYS: &[&str] = &[
    "scaling",
    "threshold",
    "kernel",
    "B",
    "resamples",
    "alpha",
    "seed",
    "out",
    "format",
];

fn resolve_kernel(
    flags: &TestArgs,
    base_kind: Option<KernelKind>,
    base_a: Option<Dim>,
    base_b: Option<Dim>,
    p: usize,
) -> Result<KernelSpec> {
    let kind = flags.kernel.or(base_kind).unwrap_or(KernelKind::Linear);
    match kind {
        KernelKind::Linear => {
            if flags.offset.is_some() || flags.degree.is_some() {
                return Err(usage("--a and --b apply only to the polynomial kernel"));
            }
            Ok(KernelSpec::Linear)
        }
        KernelKind::Poly => {
            let a = flags
                .offset
                .or(base_a)
                .map_or(DEFAULT_OFFSET, |d| d.offset(p));
            let b = match flags.degree.or(base_b) {
                Some(d) => d.degree(p)?,
                None => DEFAULT_DEGREE,
            };
            Ok(KernelSpec::polynomial(a, b)?)
        }
    }
}

/// Test parameters from flags over file values over defaults, for data of dimension `p`.
pub fn test_config(file: &TestFile, flags: &TestArgs, p: usize) -> Result<TestConfig> {
    let kernel_file = file.kernel;
    let config = TestConfig {
        scaling: flags.scaling.or(file.scaling).unwrap_or(DEFAULT_SCALING),
        threshold: flags.threshold.or(file.threshold),
        kernel: resolve_kernel(
            flags,
            kernel_file.map(|k| k.kind),
            kernel_file.and_then(|k| k.a),
            kernel_file.and_then(|k| k.b),
            p,
        )?,
        resamples: flags
            .resamples
            .or(file.resamples)
            .unwrap_or(DEFAULT_RESAMPLES),
        alpha: flags.alpha.or(file.alpha).unwrap_or(DEFAULT_ALPHA),
    };
    config.validate()?;
    Ok(config)
}

/// Where and how to write a command's artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct Destination {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Destination {
    pub fn new(flags: &OutputArgs, file_out: Option<PathBuf>, file_format: Option<Format>) -> Self {
        let path = if flags.stdout {
            None
        } else {
            flags.out.clone().or(file_out)
        };
        Self {
            path,
            format: flags.format.or(file_format),
        }
    }
}

/// A scenario with the command-specific extras of its config file.
#[derive(Debug)]
pub struct ScenarioFile {
    pub spec: Option<ScenarioSpec>,
    pub oracle: Option<usize>,
    pub draws: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Loads a scenario file; `extra` lists the command-specific keys it may carry.
pub fn load_scenario_file(path: Option<&Path>, extra: &[&str]) -> Result<ScenarioFile> {
    let mut file = ScenarioFile {
        spec: None,
        oracle: None,
        draws: None,
        out: None,
        format: None,
    };
    let Some(path) = path else {
        return Ok(file);
    };
    let mut map = read_json(path)?;
    for key in ["oracle", "draws"] {
        if map.contains_key(key) && !extra.contains(&key) {
            return Err(config_error(path, format!("unknown key '{key}'")));
        }
    }
    let mut take = |key: &str| map.remove(key);
    file.oracle = take("oracle").map(|v| decode(path, v)).transpose()?;
    file.draws = take("draws").map(|v| decode(path, v)).transpose()?;
    file.out = take("out").map(|v| decode(path, v)).transpose()?;
    file.format = take("format").map(|v| decode(path, v)).transpose()?;
    file.spec = Some(decode(path, Value::Object(map))?);
    Ok(file)
}

/// Overlays scenario flags on the file's scenario, or builds one from flags alone.
pub fn scenario(
    base: Option<ScenarioSpec>,
    flags: &ScenarioArgs,
    deltas: Option<&[f64]>,
    replications: Option<usize>,
) -> Result<ScenarioSpec> {
    let mut spec = match base {
        Some(spec) => spec,
        None => {
            let p = flags
                .p
                .ok_or_else(|| usage("--p is required without --config"))?;
            let design = match (flags.n, flags.n1, flags.n2) {
                (Some(n), _, _) => Design::OneSample {
                    n,
                    mean: MeanSpec::new(MeanKind::Dense, 0.0),
                },
                (None, Some(n1), Some(n2)) => Design::TwoSample {
                    n1,
                    n2,
                    mean1: MeanSpec::zero(),
                    mean2: MeanSpec::new(MeanKind::Dense, 0.0),
                },
                _ => return Err(usage("give --n, or --n1 and --n2, without --config")),
            };
            ScenarioSpec {
                distribution: Distribution::Mvg,
                covariance: CovarianceSpec::ar(),
                design,
                p,
                deltas: Vec::new(),
                test: TestConfig::new(DEFAULT_SCALING, KernelSpec::Linear),
                replications: DEFAULT_REPLICATIONS,
                master_seed: 0,
            }
        }
    };

    if let Some(d) = flags.distribution {
        spec.distribution = d.into();
    }
    if let Some(c) = flags.covariance {
        spec.covariance.kind = c.into();
    }
    if let Some(rho) = flags.rho {
        spec.covariance.rho = rho;
    }
    if let Some(p) = flags.p {
        spec.p = p;
    }
    let shifted = match spec.design {
        Design::OneSample { mean, .. } => mean,
        Design::TwoSample { mean2, .. } => mean2,
    };
    let shifted = match flags.mean {
        Some(kind) => MeanSpec {
            kind: kind.into(),
            ..shifted
        },
        None => shifted,
    };
    spec.design = match (spec.design, flags.n, flags.n1, flags.n2) {
        (_, Some(n), _, _) => Design::OneSample { n, mean: shifted },
        (Design::TwoSample { mean1, .. }, None, Some(n1), Some(n2)) => Design::TwoSample {
            n1,
            n2,
            mean1,
            mean2: shifted,
        },
        (Design::OneSample { .. }, None, Some(n1), Some(n2)) => Design::TwoSample {
            n1,
            n2,
            mean1: MeanSpec::zero(),
            mean2: shifted,
        },
        (Design::OneSample { n, .. }, ..) => Design::OneSample { n, mean: shifted },
        (Design::TwoSample { n1, n2, mean1, .. }, ..) => Design::TwoSample {
            n1,
            n2,
            mean1,
            mean2: shifted,
        },
    };
    if let Some(seed) = flags.seed {
        spec.master_seed = seed;
    }
    if let Some(d) = deltas {
        spec.deltas = d.to_vec();
    }
    if let Some(r) = replications {
        spec.replications = r;
    }

    let t = &flags.test;
    let test = &mut spec.test;
    if let Some(s) = t.scaling {
        test.scaling = s;
    }
    if t.threshold.is_some() {
        test.threshold = t.threshold;
    }
    if t.kernel.is_some() || t.offset.is_some() || t.degree.is_some() {
        let (kind, a, b) = match test.kernel {
            KernelSpec::Linear => (KernelKind::Linear, None, None),
            KernelSpec::Polynomial { a, b } => (
                KernelKind::Poly,
                Some(Dim::Value(a)),
                Some(Dim::Value(b as f64)),
            ),
        };
        test.kernel = resolve_kernel(t, Some(kind), a, b, spec.p)?;
    }
    if let Some(b) = t.resamples {
        test.resamples = b;
    }
    if let Some(alpha) = t.alpha {
        test.alpha = alpha;
    }
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_parses_numbers_and_p() {
        assert_eq!("p".parse::<Dim>().unwrap(), Dim::P);
        assert_eq!("4".parse::<Dim>().unwrap(), Dim::Value(4.0));
        assert!("q".parse::<Dim>().is_err());
        assert_eq!(Dim::P.degree(300).unwrap(), 300);
        assert!(Dim::Value(2.5).degree(3).is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let file: TestFile = serde_json::from_str(
            r#"{"scaling": "l1", "kernel": {"kind": "poly", "a": 4, "b": "p"}, "B": 50}"#,
        )
        .unwrap();
        let flags = TestArgs {
            resamples: Some(70),
            ..TestArgs::default()
        };
        let config = test_config(&file, &flags, 30).unwrap();
        assert_eq!(config.scaling, ScalingKind::L1);
        assert_eq!(config.kernel, KernelSpec::Polynomial { a: 4.0, b: 30 });
        assert_eq!(config.resamples, 70);
        assert_eq!(config.alpha, DEFAULT_ALPHA);
    }

    #[test]
    fn unknown_test_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"data": "x.csv", "bogus": 1}"#).unwrap();
        let err = load_test_file(Some(&path), &["data"]).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }
}
