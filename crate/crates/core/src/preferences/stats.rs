use super::PreferenceMatrix;
use nalgebra::DMatrix;

/// Selection frequencies and their (population) covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryStats {
    pub requirement_ids: Vec<String>,
    pub means: Vec<f64>,
    pub covariance: DMatrix<f64>,
}

impl BinaryStats {
    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }
}

/// Means and covariances of the rows of `m`, normalised by the user count.
pub fn binary_stats(m: &PreferenceMatrix) -> BinaryStats {
    let n = m.requirements();
    let k = m.users() as f64;
    let means: Vec<f64> = (0..n).map(|i| m.row_sum(i) as f64 / k).collect();
    let mut covariance = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let both = m
                .row(i)
                .iter()
                .zip(m.row(j))
                .filter(|(a, b)| **a == 1 && **b == 1)
                .count() as f64;
            let c = both / k - means[i] * means[j];
            covariance[(i, j)] = c;
            covariance[(j, i)] = c;
        }
    }
    BinaryStats {
        requirement_ids: m.requirement_ids().to_vec(),
        means,
        covariance,
    }
}
