mod common;

use common::rng;
use rand::Rng;
use reqsel::preferences::{
    binary_stats, fit_dichotomized_gaussian, load_preference_matrix, resample_matrix, resampling_report,
    sample_dichotomized_gaussian, sample_sharded, PreferenceMatrix,
};

fn source(seed: u64, n: usize, k: usize) -> PreferenceMatrix {
    let mut r = rng(seed);
    let base: Vec<bool> = (0..k).map(|_| r.random_bool(0.5)).collect();
    let rows = (0..n)
        .map(|i| {
            let p = 0.2 + 0.15 * i as f64;
            base.iter()
                .map(|&b| u8::from(if r.random_bool(0.5) { b } else { r.random_bool(p) }))
                .collect()
        })
        .collect();
    PreferenceMatrix::from_rows(rows).unwrap()
}

#[test]
fn csv_to_resample_pipeline() {
    let m = source(1, 4, 200);
    let mut csv = Vec::new();
    m.write_csv(&mut csv).unwrap();
    let loaded = load_preference_matrix(csv.as_slice()).unwrap();
    assert_eq!(loaded, m);

    let (sample, report) = resample_matrix(&loaded, 50_000, 3).unwrap();
    assert_eq!(sample.requirements(), 4);
    assert_eq!(sample.users(), 50_000);
    assert_eq!(sample.requirement_ids(), m.requirement_ids());
    assert!(report.within(0.015, 0.02), "{report:?}");
}

#[test]
fn more_samples_track_the_source_better() {
    let m = source(2, 4, 200);
    let stats = binary_stats(&m);
    let model = fit_dichotomized_gaussian(&stats).unwrap();
    let gap = |count: usize| -> f64 {
        (0..5)
            .map(|s| {
                let sample = sample_dichotomized_gaussian(&model, count, 100 + s).unwrap();
                let r = resampling_report(&stats, &binary_stats(&sample)).unwrap();
                r.mean_gap + r.covariance_gap
            })
            .sum::<f64>()
            / 5.0
    };
    assert!(gap(100_000) < gap(1_000));
}

#[test]
fn resample_of_resample_stays_close() {
    let m = source(3, 3, 300);
    let (first, _) = resample_matrix(&m, 20_000, 1).unwrap();
    let (second, _) = resample_matrix(&first, 20_000, 2).unwrap();
    let r = resampling_report(&binary_stats(&m), &binary_stats(&second)).unwrap();
    assert!(r.within(0.03, 0.03), "{r:?}");
}

#[test]
fn sharded_sampling_is_deterministic() {
    let m = source(4, 4, 200);
    let model = fit_dichotomized_gaussian(&binary_stats(&m)).unwrap();
    let a = sample_sharded(&model, 10_001, 9, 4).unwrap();
    let b = sample_sharded(&model, 10_001, 9, 4).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.users(), 10_001);
    let single = sample_sharded(&model, 1_000, 9, 1).unwrap();
    assert_eq!(single, sample_dichotomized_gaussian(&model, 1_000, 9).unwrap());
    assert_ne!(sample_dichotomized_gaussian(&model, 1_000, 10).unwrap(), single);
}

#[test]
fn degenerate_rows_cannot_be_fitted() {
    let m = PreferenceMatrix::from_rows(vec![vec![1, 1, 1, 1], vec![0, 1, 0, 1]]).unwrap();
    assert_eq!(m.degenerate_rows(), vec![0]);
    assert!(fit_dichotomized_gaussian(&binary_stats(&m)).is_err());
    let kept = m.without_rows(&m.degenerate_rows()).unwrap();
    assert!(fit_dichotomized_gaussian(&binary_stats(&kept)).is_ok());
}

#[test]
fn zero_count_is_rejected() {
    let m = source(5, 2, 50);
    assert!(resample_matrix(&m, 0, 1).is_err());
}
