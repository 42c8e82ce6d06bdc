//! Price sweeps, selection comparisons, synthetic instances and runtime measurement.

mod bench;
mod metrics;
mod sweep;
mod synthetic;

pub use bench::{benchmark, write_bench_csv, BenchRow};
pub use metrics::{compare_selections, frequency_profile, risk_of_value_loss};
pub use sweep::{sweep, SweepReport, SweepRow};
pub use synthetic::{generate_synthetic, SyntheticInstance, SyntheticSpec};

/// Price levels 1% to 100%.
pub fn percent_grid<T: crate::Scalar>() -> Vec<T> {
    (1..=100).map(T::from_usize_lossy).collect()
}
