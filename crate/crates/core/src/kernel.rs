//! Inner-product kernels `K(x, y) = k(x^T y)`.
//!
//! Both supported kernels depend on their arguments only through the inner
//! product, so the statistics never touch raw vectors once the Gram matrix of
//! the sign vectors is cached.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "KernelRepr")]
pub enum KernelSpec {
    /// `K(x, y) = x^T y`.
    Linear,
    /// `K(x, y) = (x^T y + a)^b`.
    Polynomial { a: f64, b: u32 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum KernelRepr {
    Linear,
    #[serde(alias = "poly")]
    Polynomial {
        a: f64,
        b: u32,
    },
}

impl TryFrom<KernelRepr> for KernelSpec {
    type Error = Error;

    fn try_from(repr: KernelRepr) -> Result<Self> {
        match repr {
            KernelRepr::Linear => Ok(KernelSpec::Linear),
            KernelRepr::Polynomial { a, b } => KernelSpec::polynomial(a, b),
        }
    }
}

impl KernelSpec {
    pub fn polynomial(a: f64, b: u32) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidKernel(format!(
                "polynomial offset must be finite and >= 0, got {a}"
            )));
        }
        if b == 0 {
            return Err(Error::InvalidKernel(
                "polynomial degree must be >= 1".into(),
            ));
        }
        if b > i32::MAX as u32 {
            return Err(Error::InvalidKernel(format!(
                "polynomial degree {b} too large"
            )));
        }
        Ok(KernelSpec::Polynomial { a, b })
    }

    /// Evaluates the kernel at inner product `u`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        match *self {
            KernelSpec::Linear => Ok(u),
            KernelSpec::Polynomial { a, b } => checked_pow(u + a, b),
        }
    }

    /// `K(0, 0)`.
    pub fn at_zero(&self) -> Result<f64> {
        self.eval(0.0)
    }

    /// Centered kernel `K(u) - K(0)`.
    pub fn centered(&self, u: f64) -> Result<f64> {
        Ok(self.eval(u)? - self.at_zero()?)
    }

    /// Analytic gradient of `K(x, y)` with respect to `x`.
    pub fn grad1(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        let factor = match *self {
            KernelSpec::Linear => 1.0,
            KernelSpec::Polynomial { a, b } => {
                let u: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
                b as f64 * checked_pow(u + a, b - 1)?
            }
        };
        Ok(y.iter().map(|v| factor * v).collect())
    }

    pub fn label(&self) -> String {
        match *self {
            KernelSpec::Linear => "linear".to_string(),
            KernelSpec::Polynomial { a, b } => format!("poly(a={a},b={b})"),
        }
    }
}

fn checked_pow(base: f64, degree: u32) -> Result<f64> {
    let v = base.powi(degree as i32);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::KernelOverflow { base, degree })
    }
}

/// Free-function form of [`KernelSpec::eval`].
pub fn kernel_eval(u: f64, spec: &KernelSpec) -> Result<f64> {
    spec.eval(u)
}

/// Free-function form of [`KernelSpec::grad1`].
pub fn kernel_grad1(x: &[f64], y: &[f64], spec: &KernelSpec) -> Result<Vec<f64>> {
    spec.grad1(x, y)
}
