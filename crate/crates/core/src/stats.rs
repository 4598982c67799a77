//! One-sample and two-sample generalized sign statistics.
//!
//! Both statistics are evaluated from a table of centered kernel values
//! `K(G[i][j]) - K(0)` over the upper triangle of the Gram matrix. The same
//! table (plus its reflection `K(-G[i][j]) - K(0)` for sign flips) drives the
//! resampling code, so an observed statistic and a resample with the identity
//! flip or permutation are computed by the same arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::GramCache;
use crate::kernel::KernelSpec;
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    First,
    Second,
}

/// Assignment of each observation to one of two groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLabels {
    assignment: Vec<Group>,
    n1: usize,
    n2: usize,
}

impl GroupLabels {
    pub fn new(assignment: Vec<Group>) -> Result<Self> {
        let n1 = assignment.iter().filter(|&&g| g == Group::First).count();
        let n2 = assignment.len() - n1;
        if n1 < 2 || n2 < 2 {
            return Err(Error::InvalidLabels(format!(
                "each group needs at least 2 members, got n1={n1}, n2={n2}"
            )));
        }
        Ok(Self { assignment, n1, n2 })
    }

    /// Labels coded as 1 and 2.
    pub fn from_codes(codes: &[u8]) -> Result<Self> {
        let assignment = codes
            .iter()
            .map(|&c| match c {
                1 => Ok(Group::First),
                2 => Ok(Group::Second),
                other => Err(Error::InvalidLabels(format!(
                    "group code must be 1 or 2, got {other}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(assignment)
    }

    /// First `n1` observations in group 1, the next `n2` in group 2.
    pub fn split(n1: usize, n2: usize) -> Result<Self> {
        let mut assignment = vec![Group::First; n1];
        assignment.resize(n1 + n2, Group::Second);
        Self::new(assignment)
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn assignment(&self) -> &[Group] {
        &self.assignment
    }

    pub fn in_first(&self) -> Vec<bool> {
        self.assignment.iter().map(|&g| g == Group::First).collect()
    }

    /// Exchanges the two groups.
    pub fn swapped(&self) -> Self {
        let assignment = self
            .assignment
            .iter()
            .map(|g| match g {
                Group::First => Group::Second,
                Group::Second => Group::First,
            })
            .collect();
        Self {
            assignment,
            n1: self.n2,
            n2: self.n1,
        }
    }
}

/// Centered kernel values over the strict upper triangle, row-major.
#[derive(Debug, Clone)]
pub(crate) struct PairTable {
    n: usize,
    same: Vec<f64>,
    flipped: Option<Vec<f64>>,
}

impl PairTable {
    /// `with_flips` also tabulates `K(-u) - K(0)` for Rademacher resampling.
    pub(crate) fn new(gram: &GramCache, kernel: &KernelSpec, with_flips: bool) -> Result<Self> {
        let n = gram.n();
        let k0 = kernel.at_zero()?;
        let pairs = n * (n - 1) / 2;
        let mut same = Vec::with_capacity(pairs);
        let mut flipped = with_flips.then(|| Vec::with_capacity(pairs));
        for i in 0..n {
            for &u in &gram.row(i)[i + 1..] {
                same.push(kernel.eval(u)? - k0);
                if let Some(f) = flipped.as_mut() {
                    f.push(kernel.eval(-u)? - k0);
                }
            }
        }
        Ok(Self { n, same, flipped })
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    /// One-sample statistic for the sign pattern `positive[i] = (alpha_i = +1)`.
    pub(crate) fn one_sample(&self, positive: Option<&[bool]>) -> f64 {
        let n = self.n;
        let mut acc = CompensatedSum::default();
        match (positive, &self.flipped) {
            (None, _) => self.same.iter().for_each(|&v| acc.add(v)),
            (Some(alpha), Some(flipped)) => {
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        acc.add(if alpha[i] == alpha[j] {
                            self.same[k]
                        } else {
                            flipped[k]
                        });
                        k += 1;
                    }
                }
            }
            (Some(_), None) => unreachable!("pair table built without flips"),
        }
        acc.value() * 2.0 / (n as f64 * (n as f64 - 1.0))
    }

    /// Two-sample statistic for membership `first[i] = (i in group 1)`.
    pub(crate) fn two_sample(&self, first: &[bool], n1: usize, n2: usize) -> f64 {
        let n = self.n;
        let (mut within1, mut within2, mut between) = (
            CompensatedSum::default(),
            CompensatedSum::default(),
            CompensatedSum::default(),
        );
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let v = self.same[k];
                match (first[i], first[j]) {
                    (true, true) => within1.add(v),
                    (false, false) => within2.add(v),
                    _ => between.add(v),
                }
                k += 1;
            }
        }
        let (n1, n2) = (n1 as f64, n2 as f64);
        within1.value() * 2.0 / (n1 * (n1 - 1.0)) + within2.value() * 2.0 / (n2 * (n2 - 1.0))
            - between.value() * 2.0 / (n1 * n2)
    }
}

/// One-sample U-statistic `(n choose 2)^-1 sum_{i<j} [K(S_i, S_j) - K(0, 0)]`.
/// With the linear kernel this is the plain generalized sign statistic.
pub fn one_sample_stat(gram: &GramCache, kernel: &KernelSpec) -> Result<f64> {
    if gram.n() < 2 {
        return Err(Error::InvalidData("need at least 2 observations".into()));
    }
    Ok(PairTable::new(gram, kernel, false)?.one_sample(None))
}

/// Two-sample statistic with centered kernel; within-group averages minus
/// twice the between-group average.
pub fn two_sample_stat(gram: &GramCache, labels: &GroupLabels, kernel: &KernelSpec) -> Result<f64> {
    check_labels(gram, labels)?;
    let table = PairTable::new(gram, kernel, false)?;
    Ok(table.two_sample(&labels.in_first(), labels.n1(), labels.n2()))
}

pub(crate) fn check_labels(gram: &GramCache, labels: &GroupLabels) -> Result<()> {
    if labels.n() != gram.n() {
        return Err(Error::DimensionMismatch {
            expected: gram.n(),
            found: labels.n(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::build_gram;
    use crate::matrix::DataMatrix;
    use crate::scaling::{ScalingKind, ScalingSpec};
    use crate::sign::sign_transform;

    fn gram(rows: &[Vec<f64>]) -> GramCache {
        let x = DataMatrix::from_rows(rows).unwrap();
        build_gram(&sign_transform(&x, &ScalingSpec::identity()))
    }

    fn e(k: usize, p: usize) -> Vec<f64> {
        let mut v = vec![0.0; p];
        v[k] = 1.0;
        v
    }

    #[test]
    fn one_sample_examples() {
        let g = gram(&[e(0, 3), e(0, 3)]);
        assert_eq!(one_sample_stat(&g, &KernelSpec::Linear).unwrap(), 1.0);

        let g = gram(&[e(0, 3), e(1, 3)]);
        let poly = KernelSpec::polynomial(1.0, 2).unwrap();
        assert_eq!(one_sample_stat(&g, &poly).unwrap(), 0.0);

        let neg: Vec<f64> = e(0, 3).iter().map(|v| -v).collect();
        let g = gram(&[e(0, 3), e(0, 3), neg]);
        let t = one_sample_stat(&g, &KernelSpec::Linear).unwrap();
        assert!((t + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_sample_examples() {
        let row = vec![0.3, -1.2, 2.0];
        let g = gram(&[row.clone(), row.clone(), row.clone(), row]);
        let labels = GroupLabels::split(2, 2).unwrap();
        for kernel in [
            KernelSpec::Linear,
            KernelSpec::polynomial(1.0, 3).unwrap(),
            KernelSpec::polynomial(4.0, 4).unwrap(),
        ] {
            assert_eq!(two_sample_stat(&g, &labels, &kernel).unwrap(), 0.0);
        }

        let g = gram(&[e(0, 2), e(0, 2), e(1, 2), e(1, 2)]);
        assert_eq!(
            two_sample_stat(&g, &labels, &KernelSpec::Linear).unwrap(),
            2.0
        );
    }

    #[test]
    fn label_validation() {
        assert!(GroupLabels::split(1, 3).is_err());
        assert!(GroupLabels::from_codes(&[1, 1, 1, 1]).is_err());
        assert!(GroupLabels::from_codes(&[1, 1, 3, 2]).is_err());
        let labels = GroupLabels::from_codes(&[1, 2, 1, 2, 2]).unwrap();
        assert_eq!((labels.n1(), labels.n2()), (2, 3));
        assert_eq!((labels.swapped().n1(), labels.swapped().n2()), (3, 2));

        let g = gram(&[e(0, 2), e(0, 2), e(1, 2)]);
        let labels = GroupLabels::split(2, 2).unwrap();
        assert!(two_sample_stat(&g, &labels, &KernelSpec::Linear).is_err());
    }

    #[test]
    fn all_inactive_rows_give_zero() {
        let x =
            DataMatrix::from_rows(&[[1e-3, 0.0], [0.0, -1e-3], [1e-3, 1e-3], [0.0, 0.0]]).unwrap();
        let signs = sign_transform(&x, &ScalingSpec::new(ScalingKind::L2, 0.5).unwrap());
        let g = build_gram(&signs);
        let poly = KernelSpec::polynomial(2.0, 3).unwrap();
        assert_eq!(one_sample_stat(&g, &poly).unwrap(), 0.0);
        let labels = GroupLabels::split(2, 2).unwrap();
        assert_eq!(two_sample_stat(&g, &labels, &poly).unwrap(), 0.0);
    }

    #[test]
    fn overflow_propagates() {
        let g = gram(&[e(0, 2), e(0, 2)]);
        let k = KernelSpec::polynomial(300.0, 300).unwrap();
        assert!(matches!(
            one_sample_stat(&g, &k),
            Err(Error::KernelOverflow { .. })
        ));
    }
}
