use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovarianceKind {
    /// `Sigma[i][j] = rho^|i-j|`.
    Ar,
    /// AR with the leading diagonal entries replaced by a spike value.
    Sar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceSpec {
    pub kind: CovarianceKind,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_spike_count")]
    pub spike_count: usize,
    /// Defaults to `p + 1`.
    #[serde(default)]
    pub spike_value: Option<f64>,
}

fn default_rho() -> f64 {
    0.5
}

fn default_spike_count() -> usize {
    5
}

impl CovarianceSpec {
    pub fn ar() -> Self {
        Self {
            kind: CovarianceKind::Ar,
            rho: default_rho(),
            spike_count: default_spike_count(),
            spike_value: None,
        }
    }

    pub fn sar() -> Self {
        Self {
            kind: CovarianceKind::Sar,
            ..Self::ar()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "rho must lie in (0, 1), got {}",
                self.rho
            )));
        }
        if let Some(v) = self.spike_value {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "spike value must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn matrix(&self, p: usize) -> DMatrix<f64> {
        let mut sigma = DMatrix::from_fn(p, p, |i, j| self.rho.powi(i.abs_diff(j) as i32));
        if self.kind == CovarianceKind::Sar {
            let spike = self.spike_value.unwrap_or((p + 1) as f64);
            for i in 0..self.spike_count.min(p) {
                sigma[(i, i)] = spike;
            }
        }
        sigma
    }
}

/// A covariance matrix with a lower-triangular factor `L`, `L L^T = Sigma`.
#[derive(Debug, Clone)]
pub struct FactoredCovariance {
    sigma: DMatrix<f64>,
    factor: DMatrix<f64>,
}

impl FactoredCovariance {
    pub fn from_matrix(sigma: DMatrix<f64>) -> Result<Self> {
        if !sigma.is_square() || sigma.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "covariance must be square and nonempty".into(),
            ));
        }
        let factor = sigma
            .clone()
            .cholesky()
            .ok_or(Error::NotPositiveDefinite)?
            .unpack();
        Ok(Self { sigma, factor })
    }

    pub fn p(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }
}

pub fn build_covariance(spec: &CovarianceSpec, p: usize) -> Result<FactoredCovariance> {
    if p == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    spec.validate()?;
    FactoredCovariance::from_matrix(spec.matrix(p))
}
