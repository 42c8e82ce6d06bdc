use super::bnb::Solution;
use crate::scalar::Scalar;
use crate::selection_models::{LinearModel, VarKind};

#[derive(Debug, Clone, PartialEq)]
pub struct Violation<T> {
    pub row: usize,
    pub name: String,
    pub amount: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<T> {
    pub max_violation: T,
    pub violations: Vec<Violation<T>>,
    /// Variables outside their bounds or binaries off {0, 1}.
    pub bad_variables: Vec<String>,
    /// Recomputed objective minus the reported one.
    pub objective_delta: T,
}

impl<T: Scalar> VerificationReport<T> {
    pub fn is_clean(&self, tolerance: T) -> bool {
        self.max_violation <= tolerance
            && self.bad_variables.is_empty()
            && self.objective_delta.abs() <= tolerance
    }
}

/// Re-evaluates every row and the objective at the reported point.
///
/// A solution without a point is checked as the all-zero assignment.
pub fn verify_solution<T: Scalar>(m: &LinearModel<T>, s: &Solution<T>) -> VerificationReport<T> {
    let values = if s.values.len() == m.variables.len() {
        s.values.clone()
    } else {
        vec![T::zero(); m.variables.len()]
    };
    let mut violations = Vec::new();
    let mut max_violation = T::zero();
    for (r, c) in m.constraints.iter().enumerate() {
        let amount = c.violation(&values);
        if amount > T::zero() {
            max_violation = max_violation.max_of(amount);
            violations.push(Violation {
                row: r,
                name: c.name.clone(),
                amount,
            });
        }
    }
    let bad_variables = m
        .variables
        .iter()
        .zip(&values)
        .filter(|(v, &x)| {
            x < v.lower
                || x > v.upper
                || (v.kind == VarKind::Binary && x != T::zero() && x != T::one())
        })
        .map(|(v, _)| v.name.clone())
        .collect();
    VerificationReport {
        max_violation,
        violations,
        bad_variables,
        objective_delta: m.objective_value(&values) - s.objective,
    }
}
