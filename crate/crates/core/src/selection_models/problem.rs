use crate::dependency_graph::{InfluenceMatrix, PrecedenceGraph};
use crate::error::{Error, Result};
use crate::scalar::{sum, Scalar};
use crate::valuation::Requirement;
use std::fmt;
use std::str::FromStr;

/// Which resource the bound limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintMode {
    /// `Σ c_i x_i ≤ b`.
    BudgetCost,
    /// `Σ v_i x_i ≤ γ`.
    PriceValue,
}

impl FromStr for ConstraintMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "budget" | "budget_cost" | "cost" => Ok(ConstraintMode::BudgetCost),
            "price" | "price_value" | "value" => Ok(ConstraintMode::PriceValue),
            other => Err(Error::invalid(format!("unknown constraint mode `{other}`"))),
        }
    }
}

impl fmt::Display for ConstraintMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintMode::BudgetCost => "budget_cost",
            ConstraintMode::PriceValue => "price_value",
        })
    }
}

/// Requirements, limit, precedence and (optionally) propagated influences.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionProblem<T> {
    pub requirements: Vec<Requirement<T>>,
    pub bound: T,
    pub mode: ConstraintMode,
    pub precedence: PrecedenceGraph,
    pub influence: Option<InfluenceMatrix<T>>,
}

impl<T: Scalar> SelectionProblem<T> {
    pub fn new(requirements: Vec<Requirement<T>>, bound: T, mode: ConstraintMode) -> Result<Self> {
        if bound < T::zero() {
            return Err(Error::invalid(format!("negative bound {bound}")));
        }
        for r in &requirements {
            r.validate()?;
        }
        let ids = requirements.iter().map(|r| r.id.clone()).collect();
        Ok(SelectionProblem {
            requirements,
            bound,
            mode,
            precedence: PrecedenceGraph::new(ids),
            influence: None,
        })
    }

    pub fn with_precedence(mut self, precedence: PrecedenceGraph) -> Result<Self> {
        if precedence.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: precedence.len(),
            });
        }
        self.precedence = precedence;
        Ok(self)
    }

    pub fn with_influence(mut self, influence: InfluenceMatrix<T>) -> Result<Self> {
        if influence.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: influence.len(),
            });
        }
        self.influence = Some(influence);
        Ok(self)
    }

    pub fn with_bound(&self, bound: T) -> Self {
        SelectionProblem {
            bound,
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.requirements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requirements.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.requirements.iter().map(|r| r.id.clone()).collect()
    }

    /// Coefficient of each requirement in the bound row.
    pub fn weights(&self) -> Vec<T> {
        self.requirements
            .iter()
            .map(|r| match self.mode {
                ConstraintMode::BudgetCost => r.cost,
                ConstraintMode::PriceValue => r.value,
            })
            .collect()
    }

    pub fn total_value(&self) -> T {
        sum(self.requirements.iter().map(|r| r.value))
    }

    pub fn total_cost(&self) -> T {
        sum(self.requirements.iter().map(|r| r.cost))
    }

    /// Influences, or all zeros when none were supplied.
    pub fn influence_or_zero(&self) -> InfluenceMatrix<T> {
        self.influence
            .clone()
            .unwrap_or_else(|| InfluenceMatrix::zeros(self.len()))
    }

    /// Bound row and precedence records both hold.
    pub fn is_feasible(&self, x: &[bool]) -> bool {
        let used = sum(self.weights().into_iter().zip(x).filter(|(_, &s)| s).map(|(w, _)| w));
        used <= self.bound && self.precedence.is_satisfied(x)
    }

    pub fn convert<U: Scalar>(&self) -> SelectionProblem<U> {
        SelectionProblem {
            requirements: self.requirements.iter().map(Requirement::convert).collect(),
            bound: U::from_f64_lossy(self.bound.as_f64()),
            mode: self.mode,
            precedence: self.precedence.clone(),
            influence: self.influence.as_ref().map(InfluenceMatrix::convert),
        }
    }
}

/// Estimated joint value of a group of requirements.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetEstimate<T> {
    pub members: Vec<usize>,
    pub value: T,
}

impl<T: Scalar> SubsetEstimate<T> {
    pub fn new(members: Vec<usize>, value: T) -> Result<Self> {
        let mut sorted = members.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() < 2 || sorted.len() != members.len() {
            return Err(Error::invalid("a subset needs at least two distinct members"));
        }
        Ok(SubsetEstimate { members, value })
    }
}
