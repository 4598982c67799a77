//! Cached pairwise inner products of sign vectors.

use crate::exec::map_indices;
use crate::scaling::ScalingSpec;
use crate::sign::SignMatrix;

/// Symmetric `n x n` matrix `G[i][j] = S_i^T S_j`, computed once in `O(n^2 p)`
/// and reused by every resample.
#[derive(Debug, Clone, PartialEq)]
pub struct GramCache {
    n: usize,
    values: Vec<f64>,
    scaling: ScalingSpec,
    provenance: u64,
}

impl GramCache {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn scaling(&self) -> &ScalingSpec {
        &self.scaling
    }

    /// FNV-1a digest of the sign matrix and scaling this cache was built from.
    pub fn provenance(&self) -> u64 {
        self.provenance
    }
}

/// Builds the Gram matrix of `signs`. Each entry is an independent dot product
/// in fixed order, so the result does not depend on the thread schedule.
pub fn build_gram(signs: &SignMatrix) -> GramCache {
    let n = signs.n();
    let upper: Vec<Vec<f64>> = map_indices(n, |i| {
        let si = signs.row(i);
        (i..n).map(|j| dot(si, signs.row(j))).collect()
    });

    let mut values = vec![0.0; n * n];
    for (i, row) in upper.into_iter().enumerate() {
        for (offset, v) in row.into_iter().enumerate() {
            let j = i + offset;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }

    GramCache {
        n,
        values,
        scaling: *signs.scaling(),
        provenance: provenance_hash(signs),
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn provenance_hash(signs: &SignMatrix) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let mut feed = |word: u64| {
        for byte in word.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    feed(signs.n() as u64);
    feed(signs.p() as u64);
    feed(signs.scaling().kind() as u64);
    feed(signs.scaling().threshold().to_bits());
    for v in signs.as_slice() {
        feed(v.to_bits());
    }
    h
}
