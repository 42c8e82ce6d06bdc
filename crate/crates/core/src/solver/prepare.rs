//! Static analysis of a model before search: row classes, continuous lower-bound
//! rules and branching order.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::selection_models::{LinearModel, Relation, Sense, VarKind};

/// A row in `Σ a_k v_k ≥ rhs` form.
#[derive(Debug, Clone)]
pub(crate) struct GeRow<T> {
    pub terms: Vec<(usize, T)>,
    pub rhs: T,
}

/// `target ≥ (rhs - Σ others) / coef` with `coef > 0`.
#[derive(Debug, Clone)]
pub(crate) struct LowerRule<T> {
    pub coef: T,
    pub others: Vec<(usize, T)>,
    pub rhs: T,
}

#[derive(Debug, Clone)]
pub(crate) struct Prepared<T> {
    pub n_vars: usize,
    pub binary: Vec<bool>,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    pub obj: Vec<T>,
    /// Rows over binaries only, in `≥` form.
    pub binary_rows: Vec<GeRow<T>>,
    /// Rows touching a continuous variable, in `≥` form.
    pub mixed_rows: Vec<GeRow<T>>,
    /// Continuous variables in declaration order with their lower-bound rules.
    pub continuous: Vec<(usize, Vec<LowerRule<T>>)>,
    pub branch_order: Vec<usize>,
    /// Capacity row as `(weights by var, rhs)` when all weights are non-negative.
    pub capacity: Option<(Vec<(usize, T)>, T)>,
    /// `(x_i, θ_i, y_i)` triples of a penalised model.
    pub penalty: Vec<(usize, usize, usize)>,
    pub x: Vec<usize>,
    /// Objective values are multiples of `1 / lattice`.
    pub lattice: Option<i64>,
}

fn ge_forms<T: Scalar>(terms: &[(usize, T)], relation: Relation, rhs: T) -> Vec<GeRow<T>> {
    let neg = || GeRow {
        terms: terms.iter().map(|&(v, a)| (v, -a)).collect(),
        rhs: -rhs,
    };
    let pos = || GeRow {
        terms: terms.to_vec(),
        rhs,
    };
    match relation {
        Relation::Ge => vec![pos()],
        Relation::Le => vec![neg()],
        Relation::Eq => vec![pos(), neg()],
    }
}

pub(crate) fn prepare<T: Scalar>(m: &LinearModel<T>) -> Result<Prepared<T>> {
    m.validate()?;
    if m.sense != Sense::Maximize {
        return Err(Error::UnsupportedModel("only maximisation is supported".into()));
    }
    let n_vars = m.variables.len();
    let binary: Vec<bool> = m.variables.iter().map(|v| v.kind == VarKind::Binary).collect();
    let mut obj = vec![T::zero(); n_vars];
    for &(v, c) in &m.objective {
        obj[v] = obj[v] + c;
    }
    for (v, var) in m.variables.iter().enumerate() {
        if !binary[v] && obj[v] > T::zero() {
            return Err(Error::UnsupportedModel(format!(
                "continuous `{}` has a positive objective coefficient",
                var.name
            )));
        }
    }
    let mut binary_rows = Vec::new();
    let mut mixed_rows = Vec::new();
    let mut rules: Vec<Vec<LowerRule<T>>> = vec![Vec::new(); n_vars];
    for c in &m.constraints {
        // merge repeated variables so every term is unique
        let mut terms: Vec<(usize, T)> = Vec::with_capacity(c.terms.len());
        for &(v, a) in &c.terms {
            match terms.iter_mut().find(|(u, _)| *u == v) {
                Some(t) => t.1 = t.1 + a,
                None => terms.push((v, a)),
            }
        }
        terms.retain(|(_, a)| *a != T::zero());
        let all_binary = terms.iter().all(|&(v, _)| binary[v]);
        for row in ge_forms(&terms, c.relation, c.rhs) {
            if all_binary {
                binary_rows.push(row);
                continue;
            }
            mixed_rows.push(row.clone());
            let raising: Vec<(usize, T)> = row
                .terms
                .iter()
                .copied()
                .filter(|&(v, a)| !binary[v] && a > T::zero())
                .collect();
            match raising.as_slice() {
                [] => {}
                [(target, coef)] => rules[*target].push(LowerRule {
                    coef: *coef,
                    others: row.terms.iter().copied().filter(|(v, _)| v != target).collect(),
                    rhs: row.rhs,
                }),
                _ => {
                    return Err(Error::UnsupportedModel(format!(
                        "row `{}` bounds several continuous variables from below",
                        c.name
                    )))
                }
            }
        }
    }
    let continuous = (0..n_vars)
        .filter(|&v| !binary[v])
        .map(|v| (v, std::mem::take(&mut rules[v])))
        .collect();

    let capacity = m.meta.capacity_row.and_then(|r| {
        let c = &m.constraints[r];
        (c.relation == Relation::Le && c.terms.iter().all(|&(v, a)| binary[v] && a >= T::zero()))
            .then(|| (c.terms.clone(), c.rhs))
    });
    let penalty = m
        .meta
        .penalty
        .as_ref()
        .map(|p| (0..m.meta.x.len()).map(|i| (m.meta.x[i], p.theta[i], p.y[i])).collect())
        .unwrap_or_default();

    let branch_order = branch_order(m, &binary, &obj, capacity.as_ref());
    let lattice = objective_lattice(&binary, &obj);
    Ok(Prepared {
        lattice,
        n_vars,
        binary,
        lower: m.variables.iter().map(|v| v.lower).collect(),
        upper: m.variables.iter().map(|v| v.upper).collect(),
        obj,
        binary_rows,
        mixed_rows,
        continuous,
        branch_order,
        capacity,
        penalty,
        x: m.meta.x.clone(),
    })
}

/// `L` such that every objective value is a multiple of `1 / L`, when all
/// objective terms sit on binaries with known denominators.
fn objective_lattice<T: Scalar>(binary: &[bool], obj: &[T]) -> Option<i64> {
    let mut l: i64 = 1;
    for (v, &c) in obj.iter().enumerate() {
        if c == T::zero() {
            continue;
        }
        if !binary[v] {
            return None;
        }
        let d = c.denominator()?;
        l = l.checked_mul(d / gcd(l, d))?;
        if l > 1_000_000_000 {
            return None;
        }
    }
    Some(l)
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Selection variables by value per unit of capacity (free items first), then
/// every other binary by index.
fn branch_order<T: Scalar>(
    m: &LinearModel<T>,
    binary: &[bool],
    obj: &[T],
    capacity: Option<&(Vec<(usize, T)>, T)>,
) -> Vec<usize> {
    let weight = |v: usize| {
        capacity
            .and_then(|(terms, _)| terms.iter().find(|(u, _)| *u == v).map(|t| t.1))
            .unwrap_or_else(T::zero)
    };
    let mut xs: Vec<usize> = m.meta.x.iter().copied().filter(|&v| binary[v]).collect();
    xs.sort_by(|&a, &b| {
        let (wa, wb) = (weight(a), weight(b));
        let ord = match (wa == T::zero(), wb == T::zero()) {
            (true, true) => obj[b].partial_cmp(&obj[a]),
            (true, false) => Some(std::cmp::Ordering::Less),
            (false, true) => Some(std::cmp::Ordering::Greater),
            // obj[a]/wa > obj[b]/wb  <=>  obj[a]*wb > obj[b]*wa
            (false, false) => (obj[b] * wa).partial_cmp(&(obj[a] * wb)),
        };
        ord.unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    let mut order = xs.clone();
    order.extend((0..binary.len()).filter(|v| binary[*v] && !xs.contains(v)));
    order
}
