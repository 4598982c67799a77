use crate::error::{Error, Result};

/// Dense `n x p` sample matrix stored row-major; row `i` is observation `X_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    p: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    /// Wraps row-major `values`. Requires `n >= 2`, `p >= 1` and finite entries.
    pub fn new(n: usize, p: usize, values: Vec<f64>) -> Result<Self> {
        Self::check_shape(n, p, values.len(), 2)?;
        Self::check_finite(&values, p)?;
        Ok(Self { n, p, values })
    }

    /// Same as [`DataMatrix::new`] but admits a single row, for generators that
    /// draw one observation at a time.
    pub fn with_min_rows(n: usize, p: usize, values: Vec<f64>, min_rows: usize) -> Result<Self> {
        Self::check_shape(n, p, values.len(), min_rows)?;
        Self::check_finite(&values, p)?;
        Ok(Self { n, p, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let p = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * p);
        for row in rows {
            let row = row.as_ref();
            if row.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), p, values)
    }

    fn check_shape(n: usize, p: usize, len: usize, min_rows: usize) -> Result<()> {
        if n < min_rows {
            return Err(Error::InvalidData(format!(
                "need at least {min_rows} observations, got {n}"
            )));
        }
        if p == 0 {
            return Err(Error::InvalidData("dimension must be at least 1".into()));
        }
        if len != n * p {
            return Err(Error::DimensionMismatch {
                expected: n * p,
                found: len,
            });
        }
        Ok(())
    }

    fn check_finite(values: &[f64], p: usize) -> Result<()> {
        match values.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(k) => Err(Error::InvalidData(format!(
                "non-finite entry at row {}, column {}",
                k / p,
                k % p
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Returns a new matrix holding the selected rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.p);
        for &i in indices {
            if i >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "row index {i} out of range for {} rows",
                    self.n
                )));
            }
            values.extend_from_slice(self.row(i));
        }
        Self::new(indices.len(), self.p, values)
    }

    /// Subtracts `center` from every row (turns `H0: mu = mu0` into `H0: mu = 0`).
    pub fn centered(&self, center: &[f64]) -> Result<Self> {
        if center.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                found: center.len(),
            });
        }
        let values = self
            .rows()
            .flat_map(|row| row.iter().zip(center).map(|(x, c)| x - c))
            .collect();
        Self::new(self.n, self.p, values)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &DataMatrix) -> Result<Self> {
        if other.p != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                found: other.p,
            });
        }
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        Self::new(self.n + other.n, self.p, values)
    }
}
