//! Generalized-sign tests for high-dimensional location problems.
//!
//! Observations are mapped to generalized signs `x / D(x)` (zeroed when the
//! scaling falls at or below a threshold), a kernel U-statistic is formed over
//! all pairs, and significance is assessed by Rademacher sign flips
//! (one-sample) or label permutations (two-sample). Every resample reuses a
//! single cached Gram matrix, so each costs `O(n^2)`.
//!
//! ```
//! use gsign::{one_sample_test, DataMatrix, KernelSpec, ScalingKind, ScalingSpec};
//!
//! let rows: Vec<Vec<f64>> = (0..20)
//!     .map(|i| (0..5).map(|j| 1.0 + ((i * 7 + j * 3) % 11) as f64 / 10.0).collect())
//!     .collect();
//! let x = DataMatrix::from_rows(&rows).unwrap();
//! let scaling = ScalingSpec::with_default_threshold(ScalingKind::L2, x.n(), x.p());
//! let result = one_sample_test(&x, &scaling, &KernelSpec::Linear, 199, 0.05, 1).unwrap();
//! assert!(result.reject);
//! ```

pub mod error;
mod exec;
pub mod gram;
pub mod io;
pub mod kernel;
pub mod matrix;
pub mod resample;
pub mod rng;
pub mod scaling;
pub mod sign;
pub mod simgen;
pub mod stats;
mod sum;

pub use error::{Error, Result};
pub use gram::{build_gram, GramCache};
pub use kernel::{kernel_eval, kernel_grad1, KernelSpec};
pub use matrix::DataMatrix;
pub use resample::{
    one_sample_test, permutation_null, rademacher_null, randomization_pvalue, two_sample_test,
    NullSample, ResampleMethod, TestConfig, TestResult,
};
pub use rng::StreamKey;
pub use scaling::{default_threshold, scale_value, ScalingKind, ScalingSpec};
pub use sign::{sign_transform, SignMatrix};
pub use stats::{one_sample_stat, two_sample_stat, Group, GroupLabels};
