use super::normal::{bivariate_cdf, inverse_cdf};
use super::{binary_stats, BinaryStats, PreferenceMatrix};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Absolute tolerance on each fitted latent correlation.
pub const BISECTION_TOLERANCE: f64 = 1e-6;
/// Floor applied to eigenvalues when repairing an indefinite latent correlation.
pub const EIGEN_FLOOR: f64 = 1e-9;

/// Latent Gaussian `z ~ N(γ, Λ)` whose sign pattern reproduces binary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomizedGaussianModel {
    pub requirement_ids: Vec<String>,
    pub thresholds: Vec<f64>,
    pub latent_correlation: DMatrix<f64>,
    pub psd_repaired: bool,
    pub repair_shift: f64,
}

impl DichotomizedGaussianModel {
    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// `V·diag(√λ)` so that `z = γ + factor·ε` has covariance Λ.
    fn factor(&self) -> DMatrix<f64> {
        let eig = SymmetricEigen::new(self.latent_correlation.clone());
        let mut v = eig.eigenvectors;
        for (c, &l) in eig.eigenvalues.iter().enumerate() {
            let s = l.max(0.0).sqrt();
            v.column_mut(c).scale_mut(s);
        }
        v
    }
}

/// Fits thresholds and pairwise latent correlations to the given means and covariances.
pub fn fit_dichotomized_gaussian(stats: &BinaryStats) -> Result<DichotomizedGaussianModel> {
    let n = stats.len();
    if stats.covariance.nrows() != n || stats.covariance.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: stats.covariance.nrows(),
        });
    }
    let id = |i: usize| {
        stats
            .requirement_ids
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("#{}", i + 1))
    };
    for (i, &m) in stats.means.iter().enumerate() {
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::DegenerateMarginal(id(i)));
        }
    }
    let thresholds: Vec<f64> = stats.means.iter().map(|&m| inverse_cdf(m)).collect();
    let mut lambda = DMatrix::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (mi, mj) = (stats.means[i], stats.means[j]);
            let joint = mi * mj + stats.covariance[(i, j)];
            let lower = (mi + mj - 1.0).max(0.0);
            let upper = mi.min(mj);
            let slack = 1e-12;
            if joint < lower - slack || joint > upper + slack {
                return Err(Error::InfeasibleCovariance {
                    first: id(i),
                    second: id(j),
                    joint,
                    lower,
                    upper,
                });
            }
            let r = solve_correlation(thresholds[i], thresholds[j], joint);
            lambda[(i, j)] = r;
            lambda[(j, i)] = r;
        }
    }
    let (latent_correlation, repair_shift) = repair(lambda);
    Ok(DichotomizedGaussianModel {
        requirement_ids: stats.requirement_ids.clone(),
        thresholds,
        latent_correlation,
        psd_repaired: repair_shift > 0.0,
        repair_shift,
    })
}

fn solve_correlation(a: f64, b: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if bivariate_cdf(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // stay strictly inside (-1, 1)
    (0.5 * (lo + hi)).clamp(-1.0 + BISECTION_TOLERANCE, 1.0 - BISECTION_TOLERANCE)
}

fn repair(lambda: DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let n = lambda.nrows();
    if n == 0 {
        return (lambda, 0.0);
    }
    let eig = SymmetricEigen::new(lambda.clone());
    let min = eig.eigenvalues.min();
    if min >= 0.0 {
        return (lambda, 0.0);
    }
    let clipped = DVector::from_iterator(n, eig.eigenvalues.iter().map(|&l| l.max(EIGEN_FLOOR)));
    let v = &eig.eigenvectors;
    let mut out = v * DMatrix::from_diagonal(&clipped) * v.transpose();
    let d: Vec<f64> = (0..n).map(|i| out[(i, i)].sqrt()).collect();
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = if i == j {
                1.0
            } else {
                out[(i, j)] / (d[i] * d[j])
            };
        }
    }
    // symmetrise away rounding noise
    let out = (&out + out.transpose()) * 0.5;
    (out, EIGEN_FLOOR - min)
}

/// Draws `count` users from the model; deterministic for a fixed seed.
pub fn sample_dichotomized_gaussian(
    model: &DichotomizedGaussianModel,
    count: usize,
    seed: u64,
) -> Result<PreferenceMatrix> {
    if count == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let columns = draw_columns(model, &model.factor(), count, seed);
    assemble(model, columns)
}

/// Splits `count` across `shards` workers seeded `seed + shard` and concatenates in shard order.
pub fn sample_sharded(
    model: &DichotomizedGaussianModel,
    count: usize,
    seed: u64,
    shards: usize,
) -> Result<PreferenceMatrix> {
    if count == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let shards = shards.clamp(1, count);
    let factor = model.factor();
    let base = count / shards;
    let extra = count % shards;
    let parts: Vec<Vec<Vec<u8>>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let size = base + usize::from(s < extra);
            draw_columns(model, &factor, size, seed.wrapping_add(s as u64))
        })
        .collect();
    assemble(model, parts.into_iter().flatten().collect())
}

fn draw_columns(
    model: &DichotomizedGaussianModel,
    factor: &DMatrix<f64>,
    count: usize,
    seed: u64,
) -> Vec<Vec<u8>> {
    let n = model.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eps = DVector::<f64>::zeros(n);
    (0..count)
        .map(|_| {
            for e in eps.iter_mut() {
                *e = StandardNormal.sample(&mut rng);
            }
            let z = factor * &eps;
            (0..n)
                .map(|i| u8::from(model.thresholds[i] + z[i] > 0.0))
                .collect()
        })
        .collect()
}

fn assemble(model: &DichotomizedGaussianModel, columns: Vec<Vec<u8>>) -> Result<PreferenceMatrix> {
    let n = model.len();
    let k = columns.len();
    let rows: Vec<Vec<u8>> = (0..n).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    let ids = if model.requirement_ids.len() == n {
        model.requirement_ids.clone()
    } else {
        (1..=n).map(|i| format!("r{i}")).collect()
    };
    let users = (1..=k).map(|t| format!("s{t}")).collect();
    PreferenceMatrix::new(ids, users, rows)
}

/// Largest absolute gaps between two sets of statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub mean_gap: f64,
    pub covariance_gap: f64,
}

impl ConvergenceReport {
    pub fn within(&self, mean_tol: f64, covariance_tol: f64) -> bool {
        self.mean_gap <= mean_tol && self.covariance_gap <= covariance_tol
    }
}

pub fn resampling_report(original: &BinaryStats, resampled: &BinaryStats) -> Result<ConvergenceReport> {
    if original.len() != resampled.len() {
        return Err(Error::DimensionMismatch {
            expected: original.len(),
            found: resampled.len(),
        });
    }
    let mean_gap = original
        .means
        .iter()
        .zip(&resampled.means)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let covariance_gap = (&original.covariance - &resampled.covariance).amax();
    Ok(ConvergenceReport {
        mean_gap,
        covariance_gap,
    })
}

/// Fit, sample and compare in one step.
pub fn resample_matrix(
    source: &PreferenceMatrix,
    count: usize,
    seed: u64,
) -> Result<(PreferenceMatrix, ConvergenceReport)> {
    let stats = binary_stats(source);
    let model = fit_dichotomized_gaussian(&stats)?;
    let sample = sample_dichotomized_gaussian(&model, count, seed)?;
    let report = resampling_report(&stats, &binary_stats(&sample))?;
    Ok((sample, report))
}
