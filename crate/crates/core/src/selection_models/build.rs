use std::collections::HashMap;

use super::model::{LinearModel, Method, ModelKind, ModelMeta, PenaltyLayout, Relation, VarKind};
use super::problem::{ConstraintMode, SelectionProblem, SubsetEstimate};
use crate::dependency_graph::Precedence;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildOptions {
    /// Substitute `g := x` and drop the rows that only tie `g` to `x`.
    pub simplify: bool,
}

pub fn build_model<T: Scalar>(
    p: &SelectionProblem<T>,
    method: Method,
    opts: BuildOptions,
) -> Result<LinearModel<T>> {
    if method == Method::Dars && p.influence.is_none() {
        return Err(Error::invalid("the dependency-aware model needs an influence matrix"));
    }
    let n = p.len();
    let mut m = LinearModel::new(ModelMeta {
        kind: ModelKind::Selection(method),
        requirement_ids: p.ids(),
        x: Vec::new(),
        penalty: None,
        subsets: Vec::new(),
        capacity_row: None,
    });
    let x: Vec<usize> = (1..=n).map(|i| m.add_var(format!("x{i}"), VarKind::Binary)).collect();
    m.meta.x = x.clone();
    capacity_row(&mut m, p);
    if method != Method::Bk {
        precedence_rows(&mut m, p)?;
    }
    match method {
        Method::Bk | Method::Pcbk => {
            m.objective = x.iter().zip(&p.requirements).map(|(&v, r)| (v, r.value)).collect();
        }
        Method::Sbk => {
            m.objective = x
                .iter()
                .zip(&p.requirements)
                .map(|(&v, r)| (v, r.expected_value()))
                .collect();
        }
        Method::Dars => penalty_block(&mut m, p, opts),
    }
    Ok(m)
}

fn capacity_row<T: Scalar>(m: &mut LinearModel<T>, p: &SelectionProblem<T>) {
    let name = match p.mode {
        ConstraintMode::BudgetCost => "budget",
        ConstraintMode::PriceValue => "price",
    };
    let terms = m.meta.x.iter().copied().zip(p.weights()).collect();
    let row = m.add_row(name.into(), terms, Relation::Le, p.bound);
    m.meta.capacity_row = Some(row);
}

/// Appends `_2`, `_3`, ... to repeated row names.
fn unique(seen: &mut HashMap<String, usize>, name: String) -> String {
    let count = seen.entry(name.clone()).or_insert(0);
    *count += 1;
    if *count == 1 {
        name
    } else {
        format!("{name}_{count}")
    }
}

fn precedence_rows<T: Scalar>(m: &mut LinearModel<T>, p: &SelectionProblem<T>) -> Result<()> {
    if p.precedence.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: p.precedence.len(),
        });
    }
    let x = m.meta.x.clone();
    let one = T::one();
    let ids = p.ids();
    let mut seen = HashMap::new();
    for c in p.precedence.constraints() {
        match c {
            Precedence::RequiresAll { source, target } => {
                m.add_row(
                    unique(&mut seen, format!("req_{}_{}", ids[*source], ids[*target])),
                    vec![(x[*source], one), (x[*target], -one)],
                    Relation::Le,
                    T::zero(),
                );
            }
            Precedence::RequiresAny { source, targets } => {
                let mut terms = vec![(x[*source], one)];
                terms.extend(targets.iter().map(|&t| (x[t], -one)));
                m.add_row(unique(&mut seen, format!("any_{}", ids[*source])), terms, Relation::Le, T::zero());
            }
            Precedence::Conflicts { a, b } => {
                for (s, t) in [(*a, *b), (*b, *a)] {
                    m.add_row(
                        unique(&mut seen, format!("conf_{}_{}", ids[s], ids[t])),
                        vec![(x[s], one), (x[t], one)],
                        Relation::Le,
                        one,
                    );
                }
            }
            Precedence::ExactlyOne { members } => {
                m.add_row(
                    unique(&mut seen, format!("one_{}", ids[members[0]])),
                    members.iter().map(|&i| (x[i], one)).collect(),
                    Relation::Eq,
                    one,
                );
            }
        }
    }
    Ok(())
}

/// Objective `Σ E_i (x_i - y_i)` with `θ_i ≥ (|I_ij| + (1 - 2x_j) I_ij) / 2` and the
/// rows forcing `y_i = x_i θ_i` through the auxiliary binary `g_i`.
fn penalty_block<T: Scalar>(m: &mut LinearModel<T>, p: &SelectionProblem<T>, opts: BuildOptions) {
    let n = p.len();
    let x = m.meta.x.clone();
    let g: Vec<usize> = if opts.simplify {
        x.clone()
    } else {
        (1..=n).map(|i| m.add_var(format!("g{i}"), VarKind::Binary)).collect()
    };
    let theta: Vec<usize> = (1..=n).map(|i| m.add_var(format!("theta{i}"), VarKind::Continuous)).collect();
    let y: Vec<usize> = (1..=n).map(|i| m.add_var(format!("y{i}"), VarKind::Continuous)).collect();
    let one = T::one();
    m.objective = (0..n)
        .flat_map(|i| {
            let e = p.requirements[i].expected_value();
            [(x[i], e), (y[i], -e)]
        })
        .collect();
    let inf = p.influence.as_ref().expect("checked by build_model");
    let ids = p.ids();
    // rows with I_ij = 0 read θ_i ≥ 0, already a bound
    for i in 0..n {
        for (j, v) in inf.nonzero_row(i) {
            if j == i {
                continue;
            }
            m.add_row(
                format!("pen_{}_{}", ids[i], ids[j]),
                vec![(theta[i], one), (x[j], v)],
                Relation::Ge,
                (v.abs() + v).half(),
            );
        }
    }
    for i in 0..n {
        let id = &ids[i];
        if !opts.simplify {
            // x_i ≤ g_i and x_i ≥ g_i
            m.add_row(format!("xg_le_{id}"), vec![(x[i], one), (g[i], -one)], Relation::Le, T::zero());
            m.add_row(format!("xg_ge_{id}"), vec![(x[i], one), (g[i], -one)], Relation::Ge, T::zero());
        }
        // y_i ≤ g_i
        m.add_row(format!("yg_{id}"), vec![(y[i], one), (g[i], -one)], Relation::Le, T::zero());
        // y_i - θ_i ≥ -(1 - g_i)
        m.add_row(
            format!("yt_{id}"),
            vec![(y[i], one), (theta[i], -one), (g[i], -one)],
            Relation::Ge,
            -one,
        );
    }
    m.meta.penalty = Some(PenaltyLayout {
        g: (!opts.simplify).then_some(g),
        theta,
        y,
    });
}

/// Budget-only knapsack whose objective adds `w_j - Σ v_k` for every fully selected subset.
pub fn build_increase_decrease<T: Scalar>(
    p: &SelectionProblem<T>,
    subsets: &[SubsetEstimate<T>],
) -> Result<LinearModel<T>> {
    let n = p.len();
    for s in subsets {
        if let Some(&bad) = s.members.iter().find(|&&k| k >= n) {
            return Err(Error::invalid(format!("subset member {bad} out of range")));
        }
        if s.members.len() < 2 {
            return Err(Error::invalid("a subset needs at least two members"));
        }
    }
    let mut m = build_model(p, Method::Bk, BuildOptions::default())?;
    if subsets.is_empty() {
        return Ok(m);
    }
    m.meta.kind = ModelKind::IncreaseDecrease;
    let x = m.meta.x.clone();
    let one = T::one();
    for (j, s) in subsets.iter().enumerate() {
        let z = m.add_var(format!("z{}", j + 1), VarKind::Binary);
        m.meta.subsets.push(z);
        let members_value = s
            .members
            .iter()
            .fold(T::zero(), |acc, &k| acc + p.requirements[k].value);
        let adjustment = s.value - members_value;
        m.objective.push((z, adjustment));
        let size = T::from_usize_lossy(s.members.len());
        let mut terms = vec![(z, size)];
        terms.extend(s.members.iter().map(|&k| (x[k], -one)));
        m.add_row(format!("subset{}", j + 1), terms, Relation::Le, T::zero());
        if adjustment < T::zero() {
            // a deficit must not be dodged by leaving z at 0
            let mut terms: Vec<(usize, T)> = s.members.iter().map(|&k| (x[k], one)).collect();
            terms.push((z, -one));
            m.add_row(format!("subset{}_all", j + 1), terms, Relation::Le, size - one);
        }
    }
    Ok(m)
}
