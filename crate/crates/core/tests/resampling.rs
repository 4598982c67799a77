use gsign::resample::{permuted_membership, rademacher_signs};
use gsign::simgen::{build_covariance, draw_sample, CovarianceSpec, Distribution};
use gsign::{
    build_gram, one_sample_stat, one_sample_test, permutation_null, rademacher_null,
    sign_transform, two_sample_stat, two_sample_test, DataMatrix, GroupLabels, KernelSpec,
    ScalingKind, ScalingSpec, StreamKey,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(n: usize, p: usize, seed: u64) -> DataMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n * p).map(|_| rng.random_range(-1.0..1.5)).collect();
    DataMatrix::new(n, p, values).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn flipped_statistics_match_recomputation_on_flipped_data() {
    let x = random_matrix(18, 6, 21);
    let seed = 99;
    for kind in ScalingKind::ALL {
        let spec =
            ScalingSpec::new(kind, 0.1 * (kind != ScalingKind::Identity) as u8 as f64).unwrap();
        for k in [KernelSpec::Linear, KernelSpec::polynomial(1.0, 3).unwrap()] {
            let null =
                rademacher_null(&build_gram(&sign_transform(&x, &spec)), &k, 40, seed).unwrap();
            for (b, &t) in null.statistics.iter().enumerate() {
                let alpha = rademacher_signs(&StreamKey::new(seed), b, x.n());
                let rows: Vec<Vec<f64>> = x
                    .rows()
                    .zip(&alpha)
                    .map(|(r, &plus)| r.iter().map(|v| if plus { *v } else { -v }).collect())
                    .collect();
                let y = DataMatrix::from_rows(&rows).unwrap();
                let direct = one_sample_stat(&build_gram(&sign_transform(&y, &spec)), &k).unwrap();
                assert!(close(t, direct), "{kind} {k:?} b={b}: {t} vs {direct}");
            }
        }
    }
}

#[test]
fn flip_closure_negating_every_sign_keeps_statistic() {
    let x = random_matrix(15, 5, 22);
    let spec = ScalingSpec::new(ScalingKind::L2, 0.0).unwrap();
    let k = KernelSpec::polynomial(0.5, 2).unwrap();
    let negated = DataMatrix::new(x.n(), x.p(), x.as_slice().iter().map(|v| -v).collect()).unwrap();
    let a = one_sample_stat(&build_gram(&sign_transform(&x, &spec)), &k).unwrap();
    let b = one_sample_stat(&build_gram(&sign_transform(&negated, &spec)), &k).unwrap();
    assert!(close(a, b));
}

#[test]
fn permuted_statistics_match_recomputation_on_reordered_data() {
    let x = random_matrix(23, 4, 23);
    let labels = GroupLabels::split(10, 13).unwrap();
    let spec = ScalingSpec::new(ScalingKind::L1, 0.0).unwrap();
    let k = KernelSpec::polynomial(2.0, 2).unwrap();
    let seed = 5;
    let null = permutation_null(
        &build_gram(&sign_transform(&x, &spec)),
        &labels,
        &k,
        50,
        seed,
    )
    .unwrap();
    for (b, &t) in null.statistics.iter().enumerate() {
        let first = permuted_membership(&StreamKey::new(seed), b, 23, 10);
        assert_eq!(first.iter().filter(|f| **f).count(), 10);
        let order: Vec<usize> = (0..23)
            .filter(|&i| first[i])
            .chain((0..23).filter(|&i| !first[i]))
            .collect();
        let y = x.select_rows(&order).unwrap();
        let direct = two_sample_stat(&build_gram(&sign_transform(&y, &spec)), &labels, &k).unwrap();
        assert!(close(t, direct), "b={b}: {t} vs {direct}");
    }
}

#[test]
fn results_are_deterministic_in_the_seed() {
    let x = random_matrix(30, 8, 25);
    let spec = ScalingSpec::with_default_threshold(ScalingKind::LInf, 30, 8);
    let k = KernelSpec::polynomial(1.0, 2).unwrap();
    let a = one_sample_test(&x, &spec, &k, 300, 0.05, 77).unwrap();
    let b = one_sample_test(&x, &spec, &k, 300, 0.05, 77).unwrap();
    let c = one_sample_test(&x, &spec, &k, 300, 0.05, 78).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.null.statistics, c.null.statistics);
}

#[test]
fn large_location_shift_is_always_detected() {
    let cov = build_covariance(&CovarianceSpec::ar(), 10).unwrap();
    let mut mean = vec![0.0; 10];
    mean[0] = 5.0;
    let spec = ScalingSpec::new(ScalingKind::L2, 0.0).unwrap();
    let mut rejected = 0;
    for r in 0..30u64 {
        let mut rng = StreamKey::new(31).child(r).rng();
        let x = draw_sample(Distribution::Mvg, &mean, &cov, 40, &mut rng).unwrap();
        let result = one_sample_test(&x, &spec, &KernelSpec::Linear, 200, 0.05, r).unwrap();
        rejected += result.reject as usize;
    }
    assert_eq!(rejected, 30);
}

/// Kolmogorov-Smirnov distance between p-values and the discrete uniform law
/// on `{1, ..., B+1} / (B+1)`.
fn ks_discrete(pvalues: &[f64], b: usize) -> f64 {
    let mut sorted = pvalues.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let mut worst = 0.0f64;
    for k in 1..=b + 1 {
        let grid = k as f64 / (b + 1) as f64;
        let ecdf = sorted.partition_point(|&p| p <= grid + 1e-12) as f64 / m;
        worst = worst.max((ecdf - grid).abs());
    }
    worst
}

#[test]
fn one_sample_null_pvalues_are_uniform() {
    let (n, p, b, reps) = (100, 20, 199, 200);
    let cov = build_covariance(&CovarianceSpec::ar(), p).unwrap();
    let mean = vec![0.0; p];
    let spec = ScalingSpec::with_default_threshold(ScalingKind::L2, n, p);
    let pvalues: Vec<f64> = (0..reps as u64)
        .map(|r| {
            let mut rng = StreamKey::new(41).child(r).rng();
            let x = draw_sample(Distribution::T3, &mean, &cov, n, &mut rng).unwrap();
            one_sample_test(&x, &spec, &KernelSpec::Linear, b, 0.05, r)
                .unwrap()
                .p_value
        })
        .collect();
    let d = ks_discrete(&pvalues, b);
    assert!(d < 1.6276 / (reps as f64).sqrt(), "KS distance {d}");
}

#[test]
fn two_sample_size_is_controlled() {
    let (n1, n2, p) = (30, 20, 15);
    let cov = build_covariance(&CovarianceSpec::sar(), p).unwrap();
    let mean = vec![0.3; p];
    let labels = GroupLabels::split(n1, n2).unwrap();
    let spec = ScalingSpec::with_default_threshold(ScalingKind::L1, n1 + n2, p);
    let reps = 200;
    let rejections: usize = (0..reps as u64)
        .map(|r| {
            let mut rng = StreamKey::new(42).child(r).rng();
            let x = draw_sample(Distribution::Mvg, &mean, &cov, n1 + n2, &mut rng).unwrap();
            two_sample_test(&x, &labels, &spec, &KernelSpec::Linear, 199, 0.05, r)
                .unwrap()
                .reject as usize
        })
        .sum();
    let rate = rejections as f64 / reps as f64;
    assert!((0.02..=0.09).contains(&rate), "size {rate}");
}
