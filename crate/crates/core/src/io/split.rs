use super::input::LabeledDataset;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::stats::GroupLabels;

/// Top and bottom tails of a score, stacked as group 1 (top) over group 2 (bottom).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileSplit {
    pub data: DataMatrix,
    pub labels: GroupLabels,
    /// Original row indices of group 1, then group 2.
    pub upper_rows: Vec<usize>,
    pub lower_rows: Vec<usize>,
}

/// Compares the top and bottom `k` percent of `ds.scores`.
///
/// With `m = ceil(k n / 100)`, the lower cut is the `m`-th smallest score and
/// the upper cut the `m`-th largest. Rows at or beyond a cut join that tail, so
/// ties at a cut can make a tail larger than `m`. Middle rows are dropped.
pub fn quantile_split(ds: &LabeledDataset, k: f64) -> Result<QuantileSplit> {
    if !(k > 0.0 && k < 50.0) {
        return Err(Error::InvalidArgument(format!(
            "quantile percent must lie in (0, 50), got {k}"
        )));
    }
    let scores = ds
        .scores
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("dataset has no score column".into()))?;
    let n = scores.len();
    // The small slack keeps exact products such as 10 * 100 / 100 from
    // rounding up to the next integer.
    let m = ((k * n as f64 / 100.0) - 1e-9).ceil().max(1.0) as usize;

    let mut sorted = scores.clone();
    sorted.sort_by(f64::total_cmp);
    let lower_cut = sorted[m - 1];
    let upper_cut = sorted[n - m];
    if upper_cut <= lower_cut {
        return Err(Error::InvalidArgument(format!(
            "the top and bottom {k}% tails overlap (cuts {lower_cut} and {upper_cut})"
        )));
    }

    let upper_rows: Vec<usize> = (0..n).filter(|&i| scores[i] >= upper_cut).collect();
    let lower_rows: Vec<usize> = (0..n).filter(|&i| scores[i] <= lower_cut).collect();
    if upper_rows.len() < 2 || lower_rows.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "each tail needs at least 2 rows, got {} and {}",
            upper_rows.len(),
            lower_rows.len()
        )));
    }

    let order: Vec<usize> = upper_rows.iter().chain(&lower_rows).copied().collect();
    Ok(QuantileSplit {
        data: ds.data.select_rows(&order)?,
        labels: GroupLabels::split(upper_rows.len(), lower_rows.len())?,
        upper_rows,
        lower_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(scores: Vec<f64>) -> LabeledDataset {
        let n = scores.len();
        let data = DataMatrix::new(n, 1, (0..n).map(|i| i as f64).collect()).unwrap();
        LabeledDataset {
            data,
            labels: None,
            scores: Some(scores),
        }
    }

    #[test]
    fn distinct_scores() {
        let ds = dataset((1..=100).map(f64::from).collect());
        let s = quantile_split(&ds, 10.0).unwrap();
        assert_eq!((s.labels.n1(), s.labels.n2()), (10, 10));
        assert_eq!(s.upper_rows, (90..100).collect::<Vec<_>>());
        assert_eq!(s.lower_rows, (0..10).collect::<Vec<_>>());
        assert_eq!(s.data.row(0), &[90.0]);
        assert_eq!(s.data.row(10), &[0.0]);
    }

    #[test]
    fn equal_scores_fail() {
        assert!(quantile_split(&dataset(vec![3.0; 50]), 10.0).is_err());
    }

    #[test]
    fn bad_inputs() {
        let ds = dataset((1..=20).map(f64::from).collect());
        assert!(quantile_split(&ds, 0.0).is_err());
        assert!(quantile_split(&ds, 50.0).is_err());
        // m = 1 leaves single-row tails.
        assert!(quantile_split(&ds, 5.0).is_err());
        let mut unscored = ds.clone();
        unscored.scores = None;
        assert!(quantile_split(&unscored, 10.0).is_err());
    }

    /// Order-statistic rule spelled out by brute force over ranks.
    fn oracle_sizes(scores: &[f64], k: f64) -> (usize, usize) {
        let n = scores.len();
        let m = (1..=n).find(|&m| (m * 100) as f64 >= k * n as f64).unwrap();
        let rank_le = |v: f64| scores.iter().filter(|&&s| s <= v).count();
        let rank_ge = |v: f64| scores.iter().filter(|&&s| s >= v).count();
        let lower = scores
            .iter()
            .copied()
            .filter(|&v| rank_le(v) >= m)
            .fold(f64::INFINITY, f64::min);
        let upper = scores
            .iter()
            .copied()
            .filter(|&v| rank_ge(v) >= m)
            .fold(f64::NEG_INFINITY, f64::max);
        (rank_ge(upper), rank_le(lower))
    }

    #[test]
    fn ties_at_the_cut_join_the_tail() {
        let base: Vec<f64> = (1..=20).map(f64::from).collect();
        let cases = [
            // ties straddling the lower cut (m = 2 at k = 10)
            vec![1.0, 2.0, 2.0, 2.0],
            // ties straddling the upper cut
            vec![19.0, 19.0, 19.0],
            vec![1.0, 1.0, 2.0, 2.0, 19.0, 20.0, 20.0],
        ];
        for overrides in cases {
            let mut scores = base.clone();
            for (i, v) in overrides.iter().enumerate() {
                let idx = if *v > 10.0 { 19 - i } else { i };
                scores[idx] = *v;
            }
            for k in [10.0, 15.0, 25.0] {
                let s = quantile_split(&dataset(scores.clone()), k).unwrap();
                let (upper, lower) = oracle_sizes(&scores, k);
                assert_eq!((s.upper_rows.len(), s.lower_rows.len()), (upper, lower));
                let m = (k * 20.0 / 100.0).ceil() as usize;
                assert!(upper >= m && lower >= m);
            }
        }
    }
}
