use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable<T> {
    pub name: String,
    pub kind: VarKind,
    pub lower: T,
    pub upper: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub name: String,
    pub terms: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn activity(&self, values: &[T]) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, &(v, c)| acc + c * values[v])
    }

    /// How far `values` falls outside the row; zero when satisfied.
    pub fn violation(&self, values: &[T]) -> T {
        let a = self.activity(values);
        match self.relation {
            Relation::Le => (a - self.rhs).max_of(T::zero()),
            Relation::Ge => (self.rhs - a).max_of(T::zero()),
            Relation::Eq => (a - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// The model families that can be compiled from a [`super::SelectionProblem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Binary knapsack on estimated values, budget only.
    Bk,
    /// Binary knapsack with precedence rows.
    Pcbk,
    /// Precedence-constrained knapsack on expected values.
    Sbk,
    /// Expected values discounted by dependency penalties.
    Dars,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Bk, Method::Pcbk, Method::Sbk, Method::Dars];

    pub fn name(self) -> &'static str {
        match self {
            Method::Bk => "bk",
            Method::Pcbk => "pcbk",
            Method::Sbk => "sbk",
            Method::Dars => "dars",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid(format!("unknown method `{s}`")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Selection(Method),
    IncreaseDecrease,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Selection(m) => write!(f, "{m}"),
            ModelKind::IncreaseDecrease => f.write_str("increase_decrease"),
        }
    }
}

/// Variable layout of a penalised model: indices of `g`, `θ` and `y` per requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenaltyLayout {
    /// `None` when `g` was substituted by `x`.
    pub g: Option<Vec<usize>>,
    pub theta: Vec<usize>,
    pub y: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub kind: ModelKind,
    pub requirement_ids: Vec<String>,
    /// Selection variable of each requirement.
    pub x: Vec<usize>,
    pub penalty: Option<PenaltyLayout>,
    /// Indicator variable of each subset (increase-decrease models).
    pub subsets: Vec<usize>,
    /// Row holding the budget or price limit.
    pub capacity_row: Option<usize>,
}

/// Mixed 0/1 linear program, solver-agnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel<T> {
    pub variables: Vec<Variable<T>>,
    pub sense: Sense,
    pub objective: Vec<(usize, T)>,
    pub constraints: Vec<Constraint<T>>,
    pub meta: ModelMeta,
}

impl<T: Scalar> LinearModel<T> {
    pub(crate) fn new(meta: ModelMeta) -> Self {
        LinearModel {
            variables: Vec::new(),
            sense: Sense::Maximize,
            objective: Vec::new(),
            constraints: Vec::new(),
            meta,
        }
    }

    pub(crate) fn add_var(&mut self, name: String, kind: VarKind) -> usize {
        self.variables.push(Variable {
            name,
            kind,
            lower: T::zero(),
            upper: T::one(),
        });
        self.variables.len() - 1
    }

    pub(crate) fn add_row(
        &mut self,
        name: String,
        terms: Vec<(usize, T)>,
        relation: Relation,
        rhs: T,
    ) -> usize {
        self.constraints.push(Constraint {
            name,
            terms,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn count(&self, kind: VarKind) -> usize {
        self.variables.iter().filter(|v| v.kind == kind).count()
    }

    pub fn objective_value(&self, values: &[T]) -> T {
        self.objective
            .iter()
            .fold(T::zero(), |acc, &(v, c)| acc + c * values[v])
    }

    /// Every row references declared variables and binaries are bounded by [0, 1].
    pub fn validate(&self) -> Result<()> {
        let n = self.variables.len();
        for v in &self.variables {
            if v.kind == VarKind::Binary && (v.lower != T::zero() || v.upper != T::one()) {
                return Err(Error::invalid(format!("binary `{}` is not bounded by [0, 1]", v.name)));
            }
            if v.lower > v.upper {
                return Err(Error::invalid(format!("`{}` has empty bounds", v.name)));
            }
        }
        let bad = |what: &str| Error::invalid(format!("{what} references an undeclared variable"));
        if self.objective.iter().any(|&(v, _)| v >= n) {
            return Err(bad("objective"));
        }
        for c in &self.constraints {
            if c.terms.iter().any(|&(v, _)| v >= n) {
                return Err(bad(&format!("row `{}`", c.name)));
            }
        }
        Ok(())
    }

    /// Debug dump with variables, objective and rows.
    pub fn to_json(&self) -> Value {
        let kind = |k: VarKind| match k {
            VarKind::Binary => "binary",
            VarKind::Continuous => "continuous",
        };
        let terms = |ts: &[(usize, T)]| -> Vec<Value> {
            ts.iter()
                .map(|&(v, c)| json!({"var": self.variables[v].name, "coef": c.as_f64()}))
                .collect()
        };
        json!({
            "kind": self.meta.kind.to_string(),
            "sense": match self.sense { Sense::Maximize => "maximize", Sense::Minimize => "minimize" },
            "variables": self.variables.iter().map(|v| json!({
                "name": v.name,
                "kind": kind(v.kind),
                "lower": v.lower.as_f64(),
                "upper": v.upper.as_f64(),
            })).collect::<Vec<_>>(),
            "objective": terms(&self.objective),
            "constraints": self.constraints.iter().map(|c| json!({
                "name": c.name,
                "terms": terms(&c.terms),
                "relation": c.relation.symbol(),
                "rhs": c.rhs.as_f64(),
            })).collect::<Vec<_>>(),
        })
    }
}
