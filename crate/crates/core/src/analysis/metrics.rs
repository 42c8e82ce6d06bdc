use super::sweep::SweepReport;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::selection_models::Method;
use crate::valuation::SelectionEvaluation;

/// Euclidean distance and Hamming count between two selections.
pub fn compare_selections(a: &[bool], b: &[bool]) -> Result<(f64, usize)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let differ = a.iter().zip(b).filter(|(x, y)| x != y).count();
    Ok(((differ as f64).sqrt(), differ))
}

/// `%F_i(a) - %F_i(b)`, where `%F_i(m)` is the share of price levels at which
/// method `m` selects requirement `i`.
pub fn frequency_profile<T: Scalar>(report: &SweepReport<T>, a: Method, b: Method) -> Result<Vec<T>> {
    let fa = frequencies(report, a)?;
    let fb = frequencies(report, b)?;
    Ok(fa.into_iter().zip(fb).map(|(x, y)| x - y).collect())
}

fn frequencies<T: Scalar>(report: &SweepReport<T>, m: Method) -> Result<Vec<T>> {
    let n = report.requirement_ids.len();
    let rows: Vec<_> = report.rows_for(m).collect();
    if rows.is_empty() {
        return Err(Error::invalid(format!("method {m} is not in the report")));
    }
    let mut counts = vec![0usize; n];
    for r in &rows {
        if let Some(x) = &r.selection {
            for (c, &s) in counts.iter_mut().zip(x) {
                *c += usize::from(s);
            }
        }
    }
    let levels = T::from_usize_lossy(rows.len());
    let hundred = T::from_usize_lossy(100);
    Ok(counts
        .into_iter()
        .map(|c| hundred * T::from_usize_lossy(c) / levels)
        .collect())
}

/// `%EV - %OV`: value put at risk by the dependency penalties.
pub fn risk_of_value_loss<T: Scalar>(e: &SelectionEvaluation<T>, total_value: T) -> Result<T> {
    if total_value <= T::zero() {
        return Err(Error::invalid("total value must be positive"));
    }
    let hundred = T::from_usize_lossy(100);
    Ok(hundred * e.ev / total_value - hundred * e.ov / total_value)
}
