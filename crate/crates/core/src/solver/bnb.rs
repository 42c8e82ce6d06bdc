use super::prepare::{prepare, Prepared};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::selection_models::LinearModel;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

const UNSET: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverConfig {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    /// A limit stopped the search; the incumbent, if any, is not proven optimal.
    NodeLimit,
    TimeLimit,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Optimal => "OPTIMAL",
            Status::Infeasible => "INFEASIBLE",
            Status::NodeLimit => "NODE_LIMIT",
            Status::TimeLimit => "TIME_LIMIT",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats<T> {
    pub nodes: u64,
    pub elapsed: Duration,
    pub root_bound: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub status: Status,
    /// Value of every model variable; empty when no feasible point was found.
    pub values: Vec<T>,
    /// Selection of each requirement.
    pub x: Vec<bool>,
    pub objective: T,
    pub theta: Option<Vec<T>>,
    pub y: Option<Vec<T>>,
    pub stats: SolveStats<T>,
}

impl<T: Scalar> Solution<T> {
    pub fn has_point(&self) -> bool {
        !self.values.is_empty()
    }

    pub fn selected(&self) -> Vec<usize> {
        (0..self.x.len()).filter(|&i| self.x[i]).collect()
    }
}

pub fn solve<T: Scalar>(m: &LinearModel<T>) -> Result<Solution<T>> {
    solve_with(m, &SolverConfig::default())
}

struct Node<T> {
    bound: T,
    next_var: usize,
    id: u64,
    state: Vec<u8>,
}

impl<T: PartialOrd> PartialEq for Node<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: PartialOrd> Eq for Node<T> {}
impl<T: PartialOrd> PartialOrd for Node<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: PartialOrd> Ord for Node<T> {
    // max-heap: higher bound, then lower branching variable, then newer node
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .partial_cmp(&other.bound)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.next_var.cmp(&self.next_var))
            .then_with(|| self.id.cmp(&other.id))
    }
}

struct Incumbent<T> {
    objective: T,
    x: Vec<bool>,
    values: Vec<T>,
}

struct Search<'a, T> {
    p: &'a Prepared<T>,
    best: Option<Incumbent<T>>,
}

impl<T: Scalar> Search<'_, T> {
    /// Bound propagation over binary rows. `false` when some row cannot hold.
    fn propagate(&self, state: &mut [u8]) -> bool {
        let slack = T::slack();
        let mut changed = true;
        while changed {
            changed = false;
            for row in &self.p.binary_rows {
                // every row is Σ a v ≥ rhs
                let mut max_act = T::zero();
                for &(v, a) in &row.terms {
                    max_act = max_act
                        + match state[v] {
                            UNSET => a.max_of(T::zero()),
                            s => a * T::from_u8(s).unwrap_or_else(T::zero),
                        };
                }
                if max_act < row.rhs - slack {
                    return false;
                }
                for &(v, a) in &row.terms {
                    if state[v] != UNSET {
                        continue;
                    }
                    // dropping the favourable choice costs |a|
                    if max_act - a.abs() < row.rhs - slack {
                        state[v] = u8::from(a > T::zero());
                        changed = true;
                    }
                }
            }
        }
        true
    }

    fn value_of(&self, state: &[u8], v: usize) -> Option<T> {
        match state[v] {
            UNSET => None,
            s => Some(if s == 1 { T::one() } else { T::zero() }),
        }
    }

    /// Lower bounds on continuous variables valid for every completion of `state`;
    /// exact minimal values when `state` is complete.
    fn continuous_lower(&self, state: &[u8]) -> Vec<T> {
        let p = self.p;
        let mut lb = p.lower.clone();
        let passes = p.continuous.len() + 2;
        for _ in 0..passes {
            let mut changed = false;
            for (v, rules) in &p.continuous {
                for rule in rules {
                    let mut others = T::zero();
                    for &(u, a) in &rule.others {
                        let hi = if p.binary[u] {
                            match self.value_of(state, u) {
                                Some(val) => a * val,
                                None => a.max_of(T::zero()),
                            }
                        } else if a > T::zero() {
                            a * p.upper[u]
                        } else {
                            a * lb[u]
                        };
                        others = others + hi;
                    }
                    let need = (rule.rhs - others) / rule.coef;
                    if need > lb[*v] {
                        lb[*v] = need;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        lb
    }

    fn bound(&self, state: &[u8]) -> T {
        let b = self.relaxation(state);
        match self.p.lattice {
            Some(steps) => b.floor_to(steps),
            None => b,
        }
    }

    fn relaxation(&self, state: &[u8]) -> T {
        let p = self.p;
        let lb = self.continuous_lower(state);
        let mut total = T::zero();
        for v in 0..p.n_vars {
            if p.binary[v] {
                if state[v] == 1 {
                    total = total + p.obj[v];
                }
            } else {
                total = total + p.obj[v] * lb[v];
            }
        }
        // value an undecided binary could still add
        let mut gain: Vec<T> = (0..p.n_vars)
            .map(|v| {
                if p.binary[v] && state[v] == UNSET {
                    p.obj[v].max_of(T::zero())
                } else {
                    T::zero()
                }
            })
            .collect();
        for &(x, theta, y) in &p.penalty {
            if state[x] == UNSET {
                let extra = (lb[theta] - lb[y]).max_of(T::zero());
                gain[x] = (p.obj[x] + p.obj[y] * extra).max_of(T::zero());
            }
        }
        match &p.capacity {
            None => total + gain.iter().fold(T::zero(), |a, &g| a + g),
            Some((weights, rhs)) => {
                let mut room = *rhs;
                let mut items: Vec<(T, T)> = Vec::new();
                let mut weighted = vec![false; p.n_vars];
                for &(v, w) in weights {
                    weighted[v] = true;
                    match state[v] {
                        1 => room = room - w,
                        UNSET if gain[v] > T::zero() => {
                            if w == T::zero() {
                                total = total + gain[v];
                            } else {
                                items.push((gain[v], w));
                            }
                        }
                        _ => {}
                    }
                }
                for v in 0..p.n_vars {
                    if !weighted[v] {
                        total = total + gain[v];
                    }
                }
                items.sort_by(|a, b| {
                    (b.0 * a.1)
                        .partial_cmp(&(a.0 * b.1))
                        .unwrap_or(Ordering::Equal)
                });
                for (g, w) in items {
                    if room <= T::zero() {
                        break;
                    }
                    if w <= room {
                        total = total + g;
                        room = room - w;
                    } else {
                        total = total + g * room / w;
                        room = T::zero();
                    }
                }
                total
            }
        }
    }

    /// Feasible values and objective of a complete assignment.
    fn evaluate(&self, state: &[u8]) -> Option<(T, Vec<T>)> {
        let p = self.p;
        let lb = self.continuous_lower(state);
        let values: Vec<T> = (0..p.n_vars)
            .map(|v| {
                if p.binary[v] {
                    self.value_of(state, v).unwrap_or_else(T::zero)
                } else {
                    lb[v]
                }
            })
            .collect();
        let slack = T::slack();
        for v in 0..p.n_vars {
            if values[v] > p.upper[v] + slack {
                return None;
            }
        }
        if !self.rows_hold(&values) {
            return None;
        }
        let obj = (0..p.n_vars).fold(T::zero(), |a, v| a + p.obj[v] * values[v]);
        Some((obj, values))
    }

    fn rows_hold(&self, values: &[T]) -> bool {
        let slack = T::slack();
        let p = self.p;
        let ok = |terms: &[(usize, T)], rhs: T| {
            terms.iter().fold(T::zero(), |a, &(v, c)| a + c * values[v]) >= rhs - slack
        };
        p.binary_rows.iter().all(|r| ok(&r.terms, r.rhs))
            && p.mixed_rows.iter().all(|r| ok(&r.terms, r.rhs))
    }

    fn lexmin_x(&self, state: &[u8]) -> Vec<bool> {
        self.p.x.iter().map(|&v| state[v] == 1).collect()
    }

    /// Whether no completion of a node with this bound can replace the incumbent.
    fn dominated(&self, bound: T, state: &[u8]) -> bool {
        let Some(best) = &self.best else {
            return false;
        };
        let slack = T::slack();
        if bound < best.objective - slack {
            return true;
        }
        bound <= best.objective + slack && self.lexmin_x(state) >= best.x
    }

    fn offer(&mut self, state: &[u8]) {
        let Some((obj, values)) = self.evaluate(state) else {
            return;
        };
        let x = self.lexmin_x(state);
        let slack = T::slack();
        let better = match &self.best {
            None => true,
            Some(b) => obj > b.objective + slack || (obj >= b.objective - slack && x < b.x),
        };
        if better {
            self.best = Some(Incumbent {
                objective: obj,
                x,
                values,
            });
        }
    }
}

pub fn solve_with<T: Scalar>(m: &LinearModel<T>, cfg: &SolverConfig) -> Result<Solution<T>> {
    let start = Instant::now();
    let prepared = prepare(m)?;
    let mut search = Search {
        p: &prepared,
        best: None,
    };
    let order = &prepared.branch_order;
    let mut nodes: u64 = 0;
    let mut next_id: u64 = 0;
    let mut status = Status::Optimal;
    let mut root_bound = None;

    let mut root = vec![UNSET; prepared.n_vars];
    let mut heap = BinaryHeap::new();
    if search.propagate(&mut root) {
        let b = search.bound(&root);
        root_bound = Some(b);
        heap.push(Node {
            bound: b,
            next_var: first_unset(order, &root, 0).map_or(usize::MAX, |k| order[k]),
            id: next_id,
            state: root,
        });
        next_id += 1;
    }

    while let Some(node) = heap.pop() {
        if search.dominated(node.bound, &node.state) {
            continue;
        }
        if cfg.node_limit.is_some_and(|l| nodes >= l) {
            status = Status::NodeLimit;
            break;
        }
        if nodes % 256 == 0 && cfg.time_limit.is_some_and(|l| start.elapsed() >= l) {
            status = Status::TimeLimit;
            break;
        }
        nodes += 1;
        let Some(k) = first_unset(order, &node.state, 0) else {
            search.offer(&node.state);
            continue;
        };
        let var = order[k];
        for value in [1u8, 0u8] {
            let mut child = node.state.clone();
            child[var] = value;
            if !search.propagate(&mut child) {
                continue;
            }
            match first_unset(order, &child, k + 1) {
                None => search.offer(&child),
                Some(ck) => {
                    let b = search.bound(&child);
                    if search.dominated(b, &child) {
                        continue;
                    }
                    heap.push(Node {
                        bound: b,
                        next_var: order[ck],
                        id: next_id,
                        state: child,
                    });
                    next_id += 1;
                }
            }
        }
    }

    let stats = SolveStats {
        nodes,
        elapsed: start.elapsed(),
        root_bound,
    };
    let n = m.meta.x.len();
    Ok(match search.best {
        Some(best) => {
            let pick = |idx: &Vec<usize>| idx.iter().map(|&v| best.values[v]).collect::<Vec<T>>();
            let (theta, y) = match &m.meta.penalty {
                Some(p) => (Some(pick(&p.theta)), Some(pick(&p.y))),
                None => (None, None),
            };
            Solution {
                status,
                x: best.x,
                objective: best.objective,
                theta,
                y,
                values: best.values,
                stats,
            }
        }
        None => Solution {
            status: if status == Status::Optimal {
                Status::Infeasible
            } else {
                status
            },
            values: Vec::new(),
            x: vec![false; n],
            objective: T::zero(),
            theta: None,
            y: None,
            stats,
        },
    })
}

fn first_unset(order: &[usize], state: &[u8], from: usize) -> Option<usize> {
    (from..order.len()).find(|&k| state[order[k]] == UNSET)
}
