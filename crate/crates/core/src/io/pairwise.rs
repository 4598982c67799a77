use std::collections::BTreeMap;

use super::input::LabeledDataset;
use crate::error::{Error, Result};
use crate::exec::try_map_indices;
use crate::matrix::DataMatrix;
use crate::resample::{two_sample_test, TestConfig};
use crate::rng::StreamKey;
use crate::stats::GroupLabels;

/// Symmetric matrix of pairwise two-sample p-values with a unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PvalueMatrix {
    pub classes: Vec<String>,
    values: Vec<f64>,
}

impl PvalueMatrix {
    pub fn from_parts(classes: Vec<String>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), classes.len() * classes.len());
        Self { classes, values }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.classes.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.classes.len();
        &self.values[i * k..(i + 1) * k]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Runs a two-sample test for every unordered pair of classes.
///
/// Classes are sorted by name; the lower-named class is group 1. Within a
/// class, rows are put in lexicographic order of their values and the seed of
/// each pair is derived from `(seed, name_a, name_b)`, so the matrix does not
/// depend on the order of rows in the input.
pub fn pairwise_compare(
    ds: &LabeledDataset,
    config: &TestConfig,
    seed: u64,
) -> Result<PvalueMatrix> {
    config.validate()?;
    let labels = ds
        .labels
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("dataset has no class labels".into()))?;

    let mut members: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        members.entry(label.as_str()).or_default().push(i);
    }
    if members.len() < 2 {
        return Err(Error::InvalidLabels(format!(
            "need at least 2 classes, found {}",
            members.len()
        )));
    }
    if let Some((name, rows)) = members.iter().find(|(_, rows)| rows.len() < 2) {
        return Err(Error::InvalidLabels(format!(
            "class '{name}' has {} member(s); at least 2 are required",
            rows.len()
        )));
    }
    for rows in members.values_mut() {
        rows.sort_by(|&a, &b| lexicographic(&ds.data, a, b));
    }

    let classes: Vec<&str> = members.keys().copied().collect();
    let k = classes.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .collect();
    let root = StreamKey::new(seed);

    let pvalues = try_map_indices(pairs.len(), |idx| -> Result<f64> {
        let (a, b) = pairs[idx];
        let (rows_a, rows_b) = (&members[classes[a]], &members[classes[b]]);
        let order: Vec<usize> = rows_a.iter().chain(rows_b).copied().collect();
        let x = ds.data.select_rows(&order)?;
        let groups = GroupLabels::split(rows_a.len(), rows_b.len())?;
        let scaling = config.scaling_spec(x.n(), x.p())?;
        let pair_seed = root.child_str(classes[a]).child_str(classes[b]).seed();
        let result = two_sample_test(
            &x,
            &groups,
            &scaling,
            &config.kernel,
            config.resamples,
            config.alpha,
            pair_seed,
        )?;
        Ok(result.p_value)
    })?;

    let mut values = vec![1.0; k * k];
    for (&(a, b), p) in pairs.iter().zip(pvalues) {
        values[a * k + b] = p;
        values[b * k + a] = p;
    }
    Ok(PvalueMatrix {
        classes: classes.into_iter().map(String::from).collect(),
        values,
    })
}

fn lexicographic(x: &DataMatrix, a: usize, b: usize) -> std::cmp::Ordering {
    x.row(a)
        .iter()
        .zip(x.row(b))
        .map(|(u, v)| u.total_cmp(v))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
