#![allow(dead_code)]

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reqsel::dependency_graph::{
    propagate_strengths, InfluenceMatrix, Precedence, PrecedenceGraph, Quality,
    ValueDependencyGraph,
};
use reqsel::selection_models::{ConstraintMode, Method, SelectionProblem};
use reqsel::valuation::{evaluate_selection, Requirement};
use reqsel::Scalar;

pub type Q = Ratio<i64>;

pub fn q(a: i64, b: i64) -> Q {
    Ratio::new(a, b)
}

/// Random graph with strengths in tenths.
pub fn random_vdg(rng: &mut ChaCha8Rng, n: usize, density: f64, negative: f64) -> ValueDependencyGraph<Q> {
    let mut g = ValueDependencyGraph::with_size(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(density) {
                let s = q(rng.random_range(1..=10), 10);
                let quality = if rng.random_bool(negative) {
                    Quality::Negative
                } else {
                    Quality::Positive
                };
                g.add_edge(i, j, s, quality).unwrap();
            }
        }
    }
    g
}

pub fn random_precedence(rng: &mut ChaCha8Rng, n: usize, records: usize) -> PrecedenceGraph {
    let mut p = PrecedenceGraph::with_size(n);
    for _ in 0..records {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        let c = match rng.random_range(0..4) {
            0 => Precedence::RequiresAll { source: idx[0], target: idx[1] },
            1 => Precedence::RequiresAny { source: idx[0], targets: idx[1..3.min(n)].to_vec() },
            2 => Precedence::Conflicts { a: idx[0], b: idx[1] },
            _ => Precedence::ExactlyOne { members: idx[..2 + usize::from(n > 2 && rng.random_bool(0.5))].to_vec() },
        };
        p.add(c).unwrap();
    }
    p
}

/// Exact random dependency-aware instance.
pub fn random_problem(rng: &mut ChaCha8Rng, n: usize) -> SelectionProblem<Q> {
    let reqs: Vec<Requirement<Q>> = (1..=n)
        .map(|i| {
            Requirement::new(
                format!("r{i}"),
                q(rng.random_range(1..=10), 1),
                q(rng.random_range(1..=20), 1),
                q(rng.random_range(10..=100), 100),
            )
            .unwrap()
        })
        .collect();
    let total: Q = reqs.iter().map(|r| r.cost).fold(q(0, 1), |a, b| a + b);
    let bound = total * q(rng.random_range(20..=90), 100);
    let (density, negative) = (rng.random_range(0.0..0.4), rng.random_range(0.0..0.6));
    let g = random_vdg(rng, n, density, negative);
    let records = rng.random_range(0..=n / 2);
    let prec = random_precedence(rng, n, records);
    SelectionProblem::new(reqs, bound, ConstraintMode::BudgetCost)
        .unwrap()
        .with_precedence(prec)
        .unwrap()
        .with_influence(propagate_strengths(&g))
        .unwrap()
}

/// Best feasible selection by exhaustive enumeration, scored the way `method`
/// optimises; ties go to the lexicographically smallest selection.
pub fn enumerate<T: Scalar>(p: &SelectionProblem<T>, method: Method) -> Option<(T, Vec<bool>)> {
    let n = p.len();
    let inf = p.influence_or_zero();
    let mut best: Option<(T, Vec<bool>)> = None;
    for mask in 0u64..(1 << n) {
        // bit n-1-i holds x_i, so counting up visits selections in lexicographic order
        let x: Vec<bool> = (0..n).map(|i| mask >> (n - 1 - i) & 1 == 1).collect();
        let feasible = if method == Method::Bk {
            p.with_bound(p.bound).is_feasible_budget_only(&x)
        } else {
            p.is_feasible(&x)
        };
        if !feasible {
            continue;
        }
        let e = evaluate_selection(&p.requirements, &inf, &x).unwrap();
        let score = match method {
            Method::Bk | Method::Pcbk => e.av,
            Method::Sbk => e.ev,
            Method::Dars => e.ov,
        };
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, x));
        }
    }
    best
}

pub trait BudgetOnly {
    fn is_feasible_budget_only(&self, x: &[bool]) -> bool;
}

impl<T: Scalar> BudgetOnly for SelectionProblem<T> {
    fn is_feasible_budget_only(&self, x: &[bool]) -> bool {
        let used = self
            .weights()
            .into_iter()
            .zip(x)
            .filter(|(_, &s)| s)
            .fold(T::zero(), |a, (w, _)| a + w);
        used <= self.bound
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn zero_influence(n: usize) -> InfluenceMatrix<Q> {
    InfluenceMatrix::zeros(n)
}
