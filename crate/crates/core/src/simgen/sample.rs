use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use super::covariance::FactoredCovariance;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// Base distribution of the simulated observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Multivariate Gaussian `mu + L z`.
    Mvg,
    /// Multivariate t with 3 degrees of freedom and scale matrix `Sigma`:
    /// `mu + L z sqrt(3 / w)`, `w ~ chi2(3)`. Its covariance is `3 Sigma`.
    T3,
    /// Multivariate t3 rescaled to covariance exactly `Sigma`: `mu + L z / sqrt(w)`.
    T3UnitCov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanKind {
    Zero,
    /// `(delta/2, delta, 3 delta/2, 0, ..., 0)`.
    Sparse,
    /// The sparse triple tiled over the leading `dense_fraction` of coordinates.
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanSpec {
    pub kind: MeanKind,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_dense_fraction")]
    pub dense_fraction: f64,
}

fn default_dense_fraction() -> f64 {
    0.9
}

impl MeanSpec {
    pub fn zero() -> Self {
        Self::new(MeanKind::Zero, 0.0)
    }

    pub fn new(kind: MeanKind, delta: f64) -> Self {
        Self {
            kind,
            delta,
            dense_fraction: default_dense_fraction(),
        }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "delta must be finite and >= 0, got {}",
                self.delta
            )));
        }
        if !(self.dense_fraction > 0.0 && self.dense_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "dense fraction must lie in (0, 1], got {}",
                self.dense_fraction
            )));
        }
        Ok(())
    }

    pub fn vector(&self, p: usize) -> Vec<f64> {
        let d = self.delta;
        let pattern = [d / 2.0, d, 1.5 * d];
        let filled = match self.kind {
            MeanKind::Zero => 0,
            MeanKind::Sparse => 3.min(p),
            MeanKind::Dense => (self.dense_fraction * p as f64 + 1e-9).floor() as usize,
        };
        (0..p)
            .map(|j| if j < filled { pattern[j % 3] } else { 0.0 })
            .collect()
    }
}

/// Draws `n` observations `mu + noise` with noise covariance determined by
/// `covariance` and `distribution`. Row `i` consumes `p` normals and then, for
/// t3, one chi-square draw, so streams are reproducible row by row.
pub fn draw_sample<R: Rng + ?Sized>(
    distribution: Distribution,
    mean: &[f64],
    covariance: &FactoredCovariance,
    n: usize,
    rng: &mut R,
) -> Result<DataMatrix> {
    let p = covariance.p();
    if mean.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: mean.len(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one draw".into()));
    }
    let chi3 = ChiSquared::<f64>::new(3.0).expect("3 degrees of freedom");

    // Column i of `z` is observation i's standard normal vector.
    let mut z = DMatrix::<f64>::zeros(p, n);
    let mut radial = vec![1.0; n];
    for (i, r) in radial.iter_mut().enumerate() {
        for v in z.column_mut(i).iter_mut() {
            *v = StandardNormal.sample(rng);
        }
        *r = match distribution {
            Distribution::Mvg => 1.0,
            Distribution::T3 => (3.0 / chi3.sample(rng)).sqrt(),
            Distribution::T3UnitCov => (1.0 / chi3.sample(rng)).sqrt(),
        };
    }

    let noise = covariance.factor() * z;
    let mut values = Vec::with_capacity(n * p);
    for (i, col) in noise.column_iter().enumerate() {
        values.extend(col.iter().zip(mean).map(|(e, m)| m + radial[i] * e));
    }
    DataMatrix::with_min_rows(n, p, values, 1)
}
