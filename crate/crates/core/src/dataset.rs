//! Bundled 27-requirement case study with its precedence structure.

use crate::dependency_graph::{InfluenceMatrix, Precedence, PrecedenceGraph};
use crate::scalar::Scalar;
use crate::selection_models::{ConstraintMode, SelectionProblem};
use crate::valuation::Requirement;

/// `(estimated value, expected value)` in money units, requirements `r1..r27`.
///
/// Selection probabilities are derived as `E / v`; the published two-decimal
/// probabilities are rounded and are kept in [`CASE_STUDY_ROUNDED_P`].
pub const CASE_STUDY_VALUES: [(i64, i64); 27] = [
    (10, 943),
    (20, 2000),
    (5, 185),
    (17, 1661),
    (6, 528),
    (20, 1830),
    (15, 1236),
    (9, 900),
    (20, 1943),
    (16, 1218),
    (20, 1136),
    (12, 1200),
    (8, 609),
    (14, 628),
    (8, 464),
    (10, 824),
    (10, 119),
    (15, 759),
    (20, 1341),
    (20, 409),
    (15, 205),
    (20, 659),
    (20, 1761),
    (1, 100),
    (5, 119),
    (1, 36),
    (5, 486),
];

/// Selection probabilities as published, in percent.
pub const CASE_STUDY_ROUNDED_P: [i64; 27] = [
    94, 100, 37, 98, 88, 91, 82, 100, 97, 76, 57, 100, 76, 45, 58, 82, 12, 51, 67, 20, 14, 33, 88,
    100, 24, 36, 97,
];

pub fn case_study_requirements<T: Scalar>() -> Vec<Requirement<T>> {
    CASE_STUDY_VALUES
        .iter()
        .enumerate()
        .map(|(i, &(v, e_cents))| {
            let value = T::from_i64(v).expect("small integer");
            let expected = T::from_i64(e_cents).expect("small integer") / T::from_i64(100).expect("100");
            Requirement {
                id: format!("r{}", i + 1),
                name: format!("r{}", i + 1),
                cost: value,
                value,
                probability: expected / value,
            }
        })
        .collect()
}

pub fn case_study_precedence() -> PrecedenceGraph {
    let r = |k: usize| k - 1;
    let mut g = PrecedenceGraph::with_size(27);
    let mut add = |c| g.add(c).expect("static constraint");
    add(Precedence::ExactlyOne { members: vec![r(2), r(6)] });
    for s in [4, 5, 8] {
        add(Precedence::RequiresAny { source: r(s), targets: vec![r(1), r(2)] });
    }
    for (s, t) in [(8, 25), (19, 2), (19, 6), (20, 2), (20, 6), (26, 27), (27, 1), (27, 6)] {
        add(Precedence::RequiresAll { source: r(s), target: r(t) });
    }
    add(Precedence::Conflicts { a: r(17), b: r(18) });
    g
}

/// Case study under a price limit of `percent`% of the total estimated value.
/// The dependency graph is empty, so the influence matrix is all zeros; replace
/// it with [`SelectionProblem::with_influence`].
pub fn case_study<T: Scalar>(percent: T) -> SelectionProblem<T> {
    let reqs = case_study_requirements::<T>();
    let total = reqs.iter().fold(T::zero(), |a, r| a + r.value);
    let bound = percent / T::from_i64(100).expect("100") * total;
    SelectionProblem::new(reqs, bound, ConstraintMode::PriceValue)
        .and_then(|p| p.with_precedence(case_study_precedence()))
        .and_then(|p| p.with_influence(InfluenceMatrix::zeros(27)))
        .expect("bundled data is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn totals() {
        let reqs = case_study_requirements::<Ratio<i64>>();
        let v = reqs.iter().fold(Ratio::from_integer(0), |a, r| a + r.value);
        let e = reqs.iter().fold(Ratio::from_integer(0), |a, r| a + r.expected_value());
        assert_eq!(v, Ratio::from_integer(342));
        assert_eq!(e, Ratio::new(23299, 100));
    }
}
