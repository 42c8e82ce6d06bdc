//! Binary user-preference matrices: loading, summary statistics and
//! dichotomized-Gaussian resampling.
//!
//! Rows are requirements, columns are users.

mod dichotomized;
mod matrix;
pub mod normal;
mod stats;

pub use dichotomized::{
    fit_dichotomized_gaussian, resample_matrix, resampling_report, sample_dichotomized_gaussian, sample_sharded,
    ConvergenceReport, DichotomizedGaussianModel, BISECTION_TOLERANCE, EIGEN_FLOOR,
};
pub use matrix::{load_preference_matrix, PreferenceMatrix};
pub use stats::{binary_stats, BinaryStats};
