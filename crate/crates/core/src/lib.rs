//! Dependency-aware requirement selection.
//!
//! The pipeline runs from binary user preferences to causal strengths
//! ([`identification`]), a signed fuzzy dependency graph and its closure
//! ([`dependency_graph`]), penalised overall value ([`valuation`]), 0/1 models
//! ([`selection_models`]) and an exact branch-and-bound ([`solver`]).

pub mod analysis;
pub mod dataset;
pub mod dependency_graph;
pub mod error;
pub mod identification;
pub mod preferences;
pub mod scalar;
pub mod selection_models;
pub mod solver;
pub mod valuation;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default floating-point scalar.
pub type Real = f64;
/// Exact rational scalar.
pub type Exact = num_rational::Ratio<i64>;

pub type Vdg = dependency_graph::ValueDependencyGraph<f64>;
pub type VdgF32 = dependency_graph::ValueDependencyGraph<f32>;
pub type ExactVdg = dependency_graph::ValueDependencyGraph<Exact>;
pub type Influence = dependency_graph::InfluenceMatrix<f64>;
pub type InfluenceF32 = dependency_graph::InfluenceMatrix<f32>;
pub type ExactInfluence = dependency_graph::InfluenceMatrix<Exact>;

pub type Problem = selection_models::SelectionProblem<f64>;
pub type ProblemF32 = selection_models::SelectionProblem<f32>;
pub type ExactProblem = selection_models::SelectionProblem<Exact>;
pub type Model = selection_models::LinearModel<f64>;
pub type ExactModel = selection_models::LinearModel<Exact>;
pub type Solution = solver::Solution<f64>;
pub type ExactSolution = solver::Solution<Exact>;
