//! Randomization null distributions and p-values.
//!
//! One-sample nulls multiply each sign vector by an independent Rademacher
//! sign, which only changes `G[i][j]` into `alpha_i alpha_j G[i][j]`; two-sample
//! nulls redraw the group-1 subset. Both reuse the Gram cache, so each resample
//! costs `O(n^2)` regardless of the dimension.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::map_indices;
use crate::gram::{build_gram, GramCache};
use crate::kernel::KernelSpec;
use crate::matrix::DataMatrix;
use crate::rng::StreamKey;
use crate::scaling::{default_threshold, ScalingKind, ScalingSpec};
use crate::sign::sign_transform;
use crate::stats::{check_labels, GroupLabels, PairTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMethod {
    RademacherFlip,
    LabelPermutation,
    /// Statistics of independent datasets drawn under the null (simulation only).
    MonteCarloOracle,
}

impl ResampleMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::RademacherFlip => "rademacher_flip",
            Self::LabelPermutation => "label_permutation",
            Self::MonteCarloOracle => "monte_carlo_oracle",
        }
    }
}

/// Null statistics `T*_1, ..., T*_B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSample {
    pub statistics: Vec<f64>,
    pub seed: u64,
    pub method: ResampleMethod,
}

impl NullSample {
    pub fn len(&self) -> usize {
        self.statistics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statistics.is_empty()
    }

    /// Number of null statistics at or above `t`.
    pub fn exceedances(&self, t: f64) -> usize {
        self.statistics.iter().filter(|&&s| s >= t).count()
    }
}

/// Outcome of a randomization test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub null: NullSample,
    pub alpha: f64,
    pub reject: bool,
}

/// Test parameters shared by simulations and the pairwise comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestConfig {
    pub scaling: ScalingKind,
    /// Zeroing threshold; `None` uses `n^(-8/p)` with the pooled sample size.
    #[serde(default)]
    pub threshold: Option<f64>,
    pub kernel: KernelSpec,
    #[serde(alias = "B")]
    pub resamples: usize,
    pub alpha: f64,
}

impl TestConfig {
    pub fn new(scaling: ScalingKind, kernel: KernelSpec) -> Self {
        Self {
            scaling,
            threshold: None,
            kernel,
            resamples: 1000,
            alpha: 0.05,
        }
    }

    pub fn scaling_spec(&self, n: usize, p: usize) -> Result<ScalingSpec> {
        ScalingSpec::new(
            self.scaling,
            self.threshold.unwrap_or_else(|| default_threshold(n, p)),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.resamples == 0 {
            return Err(Error::InvalidArgument("need at least one resample".into()));
        }
        check_alpha(self.alpha)?;
        if let Some(t) = self.threshold {
            ScalingSpec::new(self.scaling, t)?;
        }
        Ok(())
    }
}

/// Draws `resamples` Rademacher-flipped statistics. Resample `b` uses ChaCha
/// stream `b` under `seed`, so the output is independent of thread count.
pub fn rademacher_null(
    gram: &GramCache,
    kernel: &KernelSpec,
    resamples: usize,
    seed: u64,
) -> Result<NullSample> {
    check_resamples(resamples)?;
    if !gram.scaling().kind().is_even() {
        return Err(Error::InvalidScaling(format!(
            "sign flipping requires an even scaling function, got {}",
            gram.scaling().kind()
        )));
    }
    let table = PairTable::new(gram, kernel, true)?;
    let key = StreamKey::new(seed);
    let n = table.n();
    let statistics = map_indices(resamples, |b| {
        let alpha = rademacher_signs(&key, b, n);
        table.one_sample(Some(&alpha))
    });
    finish(statistics, seed, ResampleMethod::RademacherFlip)
}

/// Sign pattern of resample `b`: `true` for `+1`.
pub fn rademacher_signs(key: &StreamKey, b: usize, n: usize) -> Vec<bool> {
    let mut rng = key.substream(b as u64);
    (0..n).map(|_| rng.random::<bool>()).collect()
}

/// Draws `resamples` statistics under uniformly random relabelings that keep
/// the group sizes.
pub fn permutation_null(
    gram: &GramCache,
    labels: &GroupLabels,
    kernel: &KernelSpec,
    resamples: usize,
    seed: u64,
) -> Result<NullSample> {
    check_resamples(resamples)?;
    check_labels(gram, labels)?;
    let table = PairTable::new(gram, kernel, false)?;
    let key = StreamKey::new(seed);
    let (n, n1, n2) = (labels.n(), labels.n1(), labels.n2());
    let statistics = map_indices(resamples, |b| {
        let first = permuted_membership(&key, b, n, n1);
        table.two_sample(&first, n1, n2)
    });
    finish(statistics, seed, ResampleMethod::LabelPermutation)
}

/// Group-1 membership of resample `b`: a uniform subset of size `n1`.
pub fn permuted_membership(key: &StreamKey, b: usize, n: usize, n1: usize) -> Vec<bool> {
    let mut rng = key.substream(b as u64);
    let mut first = vec![false; n];
    for i in index::sample(&mut rng, n, n1) {
        first[i] = true;
    }
    first
}

fn check_resamples(resamples: usize) -> Result<()> {
    if resamples == 0 {
        return Err(Error::InvalidArgument("need at least one resample".into()));
    }
    Ok(())
}

fn finish(statistics: Vec<f64>, seed: u64, method: ResampleMethod) -> Result<NullSample> {
    if let Some(b) = statistics.iter().position(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "resample {b} produced a non-finite statistic"
        )));
    }
    Ok(NullSample {
        statistics,
        seed,
        method,
    })
}

/// `p = (1 + #{b : T*_b >= T}) / (B + 1)`; rejects when `p <= alpha`.
pub fn randomization_pvalue(statistic: f64, null: NullSample, alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    check_resamples(null.len())?;
    let p_value = (1 + null.exceedances(statistic)) as f64 / (null.len() + 1) as f64;
    Ok(TestResult {
        statistic,
        p_value,
        null,
        alpha,
        reject: p_value <= alpha,
    })
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// Tests `H0: mu = 0` with a Rademacher-flip null. Subtract `mu0` from the rows
/// first to test another center.
pub fn one_sample_test(
    x: &DataMatrix,
    scaling: &ScalingSpec,
    kernel: &KernelSpec,
    resamples: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestResult> {
    check_alpha(alpha)?;
    let gram = build_gram(&sign_transform(x, scaling));
    let table = PairTable::new(&gram, kernel, false)?;
    let statistic = table.one_sample(None);
    let null = rademacher_null(&gram, kernel, resamples, seed)?;
    randomization_pvalue(statistic, null, alpha)
}

/// Tests `H0: mu1 = mu2` with a label-permutation null. The sign transform is
/// applied to the pooled sample.
pub fn two_sample_test(
    x: &DataMatrix,
    labels: &GroupLabels,
    scaling: &ScalingSpec,
    kernel: &KernelSpec,
    resamples: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestResult> {
    check_alpha(alpha)?;
    if labels.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: labels.n(),
        });
    }
    let gram = build_gram(&sign_transform(x, scaling));
    let table = PairTable::new(&gram, kernel, false)?;
    let statistic = table.two_sample(&labels.in_first(), labels.n1(), labels.n2());
    let null = permutation_null(&gram, labels, kernel, resamples, seed)?;
    randomization_pvalue(statistic, null, alpha)
}
