//! Synthetic data generators and the Monte-Carlo power/size engine.

mod covariance;
mod sample;

pub use covariance::{build_covariance, CovarianceKind, CovarianceSpec, FactoredCovariance};
pub use sample::{draw_sample, Distribution, MeanKind, MeanSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::try_map_indices;
use crate::gram::build_gram;
use crate::matrix::DataMatrix;
pub use crate::resample::TestConfig;
use crate::resample::{one_sample_test, two_sample_test, NullSample, ResampleMethod, TestResult};
use crate::rng::StreamKey;
use crate::sign::sign_transform;
use crate::stats::{one_sample_stat, two_sample_stat, GroupLabels};

/// Stream index reserved for oracle-null datasets under the master seed.
pub const ORACLE_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Design {
    OneSample {
        n: usize,
        mean: MeanSpec,
    },
    /// Group 1 has `n1` rows with mean `mean1`, group 2 has `n2` rows with mean `mean2`.
    TwoSample {
        n1: usize,
        n2: usize,
        #[serde(default = "MeanSpec::zero")]
        mean1: MeanSpec,
        mean2: MeanSpec,
    },
}

impl Design {
    pub fn total_n(&self) -> usize {
        match *self {
            Design::OneSample { n, .. } => n,
            Design::TwoSample { n1, n2, .. } => n1 + n2,
        }
    }

    /// The shifted mean's pattern, which selects the default delta grid.
    fn alternative_kind(&self) -> MeanKind {
        match self {
            Design::OneSample { mean, .. } => mean.kind,
            Design::TwoSample { mean1, mean2, .. } => {
                if mean2.kind != MeanKind::Zero {
                    mean2.kind
                } else {
                    mean1.kind
                }
            }
        }
    }
}

/// A complete simulation setting: generator, sizes, test and delta grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub distribution: Distribution,
    pub covariance: CovarianceSpec,
    pub design: Design,
    pub p: usize,
    /// Empty means the default grid for this design, covariance and mean.
    #[serde(default)]
    pub deltas: Vec<f64>,
    pub test: TestConfig,
    pub replications: usize,
    pub master_seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidArgument(
                "dimension must be at least 1".into(),
            ));
        }
        if self.replications == 0 {
            return Err(Error::InvalidArgument(
                "need at least one replication".into(),
            ));
        }
        match self.design {
            Design::OneSample { n, mean } => {
                if n < 2 {
                    return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
                }
                mean.validate()?;
            }
            Design::TwoSample {
                n1,
                n2,
                mean1,
                mean2,
            } => {
                if n1 < 2 || n2 < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "need n1, n2 >= 2, got {n1} and {n2}"
                    )));
                }
                mean1.validate()?;
                mean2.validate()?;
            }
        }
        if let Some(d) = self.deltas.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::InvalidArgument(format!("invalid delta {d}")));
        }
        self.covariance.validate()?;
        self.test.validate()
    }

    pub fn delta_grid(&self) -> Vec<f64> {
        if self.deltas.is_empty() {
            default_deltas(&self.design, self.covariance.kind)
        } else {
            self.deltas.clone()
        }
    }

    fn mean_vectors(&self, delta: f64) -> (Vec<f64>, Option<Vec<f64>>) {
        let shift = |m: MeanSpec| {
            if m.kind == MeanKind::Zero {
                m
            } else {
                m.with_delta(delta)
            }
        };
        match self.design {
            Design::OneSample { mean, .. } => (shift(mean).vector(self.p), None),
            Design::TwoSample { mean1, mean2, .. } => (
                shift(mean1).vector(self.p),
                Some(shift(mean2).vector(self.p)),
            ),
        }
    }

    fn labels(&self) -> Result<Option<GroupLabels>> {
        match self.design {
            Design::OneSample { .. } => Ok(None),
            Design::TwoSample { n1, n2, .. } => GroupLabels::split(n1, n2).map(Some),
        }
    }
}

/// Delta grids used for each setting of the published simulation study.
pub fn default_deltas(design: &Design, covariance: CovarianceKind) -> Vec<f64> {
    use CovarianceKind::{Ar, Sar};
    use MeanKind::{Dense, Sparse, Zero};
    let grid: &[f64] = match (design, covariance, design.alternative_kind()) {
        (_, _, Zero) => &[0.0],
        (Design::OneSample { .. }, Ar, Dense) => &[0.0, 0.02, 0.04, 0.06, 0.08, 0.10, 0.12],
        (Design::OneSample { .. }, Ar, Sparse) => &[0.0, 0.15, 0.30, 0.45, 0.60, 0.75, 0.90],
        (Design::OneSample { .. }, Sar, Dense) => &[0.0, 0.10, 0.20, 0.30, 0.40, 0.50, 0.60],
        (Design::OneSample { .. }, Sar, Sparse) => &[0.0, 1.05, 2.10, 3.15, 4.20, 5.25, 6.30],
        (Design::TwoSample { .. }, Ar, Dense) => &[0.0, 0.03, 0.06, 0.09, 0.12, 0.15, 0.18],
        (Design::TwoSample { .. }, Ar, Sparse) => &[0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0],
        (Design::TwoSample { .. }, Sar, Dense) => &[0.0, 0.15, 0.30, 0.45, 0.60, 0.75],
        (Design::TwoSample { .. }, Sar, Sparse) => &[0.0, 3.0, 6.0, 9.0, 12.0, 14.0, 16.0],
    };
    grid.to_vec()
}

/// Draws one dataset of `spec` at shift `delta` from the stream at `key`.
/// Two-sample datasets stack group 1 above group 2.
pub fn simulate_dataset(
    spec: &ScenarioSpec,
    covariance: &FactoredCovariance,
    delta: f64,
    key: StreamKey,
) -> Result<DataMatrix> {
    let mut rng = key.rng();
    let (mean1, mean2) = spec.mean_vectors(delta);
    match (spec.design, mean2) {
        (Design::OneSample { n, .. }, _) => {
            draw_sample(spec.distribution, &mean1, covariance, n, &mut rng)
        }
        (Design::TwoSample { n1, n2, .. }, Some(mean2)) => {
            let first = draw_sample(spec.distribution, &mean1, covariance, n1, &mut rng)?;
            let second = draw_sample(spec.distribution, &mean2, covariance, n2, &mut rng)?;
            first.vstack(&second)
        }
        (Design::TwoSample { .. }, None) => unreachable!("two-sample design yields two means"),
    }
}

/// Observed statistic of `spec`'s test on `x`, without resampling.
pub fn scenario_statistic(spec: &ScenarioSpec, x: &DataMatrix) -> Result<f64> {
    let scaling = spec.test.scaling_spec(x.n(), x.p())?;
    let gram = build_gram(&sign_transform(x, &scaling));
    match spec.labels()? {
        None => one_sample_stat(&gram, &spec.test.kernel),
        Some(labels) => two_sample_stat(&gram, &labels, &spec.test.kernel),
    }
}

fn run_test(spec: &ScenarioSpec, x: &DataMatrix, seed: u64) -> Result<TestResult> {
    let t = &spec.test;
    let scaling = t.scaling_spec(x.n(), x.p())?;
    match spec.labels()? {
        None => one_sample_test(x, &scaling, &t.kernel, t.resamples, t.alpha, seed),
        Some(labels) => {
            two_sample_test(x, &labels, &scaling, &t.kernel, t.resamples, t.alpha, seed)
        }
    }
}

/// Rejection count with its Monte-Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rejections: usize,
    pub replications: usize,
    pub power: f64,
    pub se: f64,
}

impl RateEstimate {
    pub fn new(rejections: usize, replications: usize) -> Self {
        let q = rejections as f64 / replications as f64;
        Self {
            rejections,
            replications,
            power: q,
            se: (q * (1.0 - q) / replications as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub delta: f64,
    /// Randomization-null rejections.
    pub randomization: RateEstimate,
    /// Rejections against oracle-null critical values, when requested.
    pub oracle: Option<RateEstimate>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerTable {
    pub rows: Vec<PowerRow>,
}

/// Runs `spec.replications` datasets per delta and reports rejection rates.
/// Dataset `(d, r)` draws from stream `(master_seed, d, r)`, so every test
/// configuration sees the same datasets. When `oracle` is given, each dataset
/// is also tested against it with `p = (1 + #{null >= T}) / (S + 1)`.
pub fn power_study(spec: &ScenarioSpec, oracle: Option<&NullSample>) -> Result<PowerTable> {
    power_study_with_progress(spec, oracle, |_, _| {})
}

/// [`power_study`] with a callback receiving `(finished, total)` replicate
/// counts; it may be invoked from several threads.
pub fn power_study_with_progress<F>(
    spec: &ScenarioSpec,
    oracle: Option<&NullSample>,
    progress: F,
) -> Result<PowerTable>
where
    F: Fn(usize, usize) + Sync + Send,
{
    spec.validate()?;
    if oracle.is_some_and(|o| o.is_empty()) {
        return Err(Error::InvalidArgument("oracle null is empty".into()));
    }
    let covariance = build_covariance(&spec.covariance, spec.p)?;
    let deltas = spec.delta_grid();
    let reps = spec.replications;
    let total = deltas.len() * reps;
    let master = StreamKey::new(spec.master_seed);
    let finished = std::sync::atomic::AtomicUsize::new(0);

    let outcomes = try_map_indices(total, |k| -> Result<(bool, bool)> {
        let (d, r) = (k / reps, k % reps);
        let key = master.child(d as u64).child(r as u64);
        let x = simulate_dataset(spec, &covariance, deltas[d], key.child(0))?;
        let result = run_test(spec, &x, key.child(1).seed())?;
        let oracle_reject = oracle.is_some_and(|null| {
            let p = (1 + null.exceedances(result.statistic)) as f64 / (null.len() + 1) as f64;
            p <= spec.test.alpha
        });
        let done = finished.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
        progress(done, total);
        Ok((result.reject, oracle_reject))
    })?;

    let rows = deltas
        .iter()
        .zip(outcomes.chunks(reps))
        .map(|(&delta, chunk)| {
            let rn = chunk.iter().filter(|o| o.0).count();
            let on = chunk.iter().filter(|o| o.1).count();
            PowerRow {
                delta,
                randomization: RateEstimate::new(rn, reps),
                oracle: oracle.map(|_| RateEstimate::new(on, reps)),
            }
        })
        .collect();
    Ok(PowerTable { rows })
}

/// Statistics of `draws` independent datasets of `spec` at delta 0: the
/// Monte-Carlo "oracle" null. Dataset `s` uses stream
/// `(master_seed, ORACLE_STREAM, s)`.
pub fn oracle_null(spec: &ScenarioSpec, draws: usize) -> Result<NullSample> {
    spec.validate()?;
    if draws == 0 {
        return Err(Error::InvalidArgument(
            "need at least one oracle draw".into(),
        ));
    }
    let covariance = build_covariance(&spec.covariance, spec.p)?;
    let key = StreamKey::new(spec.master_seed).child(ORACLE_STREAM);
    let statistics = try_map_indices(draws, |s| {
        let x = simulate_dataset(spec, &covariance, 0.0, key.child(s as u64))?;
        scenario_statistic(spec, &x)
    })?;
    Ok(NullSample {
        statistics,
        seed: spec.master_seed,
        method: ResampleMethod::MonteCarloOracle,
    })
}
