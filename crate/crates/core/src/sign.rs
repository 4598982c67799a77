//! The generalized sign transform `S_i = X_i / D(X_i) * 1{D(X_i) > eps}`.

use crate::matrix::DataMatrix;
use crate::scaling::{ScalingKind, ScalingSpec};

/// Generalized sign vectors, one per observation. Rows whose scale falls at or
/// below the threshold are exactly zero and flagged inactive; they still count
/// toward the number of observations.
#[derive(Debug, Clone, PartialEq)]
pub struct SignMatrix {
    n: usize,
    p: usize,
    values: Vec<f64>,
    active: Vec<bool>,
    scaling: ScalingSpec,
}

impl SignMatrix {
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

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn scaling(&self) -> &ScalingSpec {
        &self.scaling
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Applies the generalized sign transform row by row.
pub fn sign_transform(x: &DataMatrix, spec: &ScalingSpec) -> SignMatrix {
    let (n, p) = (x.n(), x.p());
    if spec.kind() == ScalingKind::Identity {
        return SignMatrix {
            n,
            p,
            values: x.as_slice().to_vec(),
            active: vec![true; n],
            scaling: *spec,
        };
    }

    let mut values = Vec::with_capacity(n * p);
    let mut active = Vec::with_capacity(n);
    for row in x.rows() {
        let d = spec.value(row);
        if d > spec.threshold() {
            values.extend(row.iter().map(|v| v / d));
            active.push(true);
        } else {
            values.extend(std::iter::repeat_n(0.0, p));
            active.push(false);
        }
    }
    SignMatrix {
        n,
        p,
        values,
        active,
        scaling: *spec,
    }
}
