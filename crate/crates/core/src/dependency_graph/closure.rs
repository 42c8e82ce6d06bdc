use super::vdg::{Quality, ValueDependencyGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Largest graph accepted by [`brute_force_influence`].
pub const BRUTE_FORCE_LIMIT: usize = 10;
/// Above this size [`propagate_strengths`] switches to per-source search.
pub const DENSE_CLOSURE_LIMIT: usize = 256;

/// All-pairs strongest positive and negative dependency strengths.
///
/// `influence(i, j) = pos(i, j) - neg(i, j)` is the net effect of `r_j` on the value of `r_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceMatrix<T> {
    n: usize,
    pos: Vec<T>,
    neg: Vec<T>,
}

impl<T: Scalar> InfluenceMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        InfluenceMatrix {
            n,
            pos: vec![T::zero(); n * n],
            neg: vec![T::zero(); n * n],
        }
    }

    pub fn from_parts(n: usize, pos: Vec<T>, neg: Vec<T>) -> Result<Self> {
        for v in [&pos, &neg] {
            if v.len() != n * n {
                return Err(Error::DimensionMismatch {
                    expected: n * n,
                    found: v.len(),
                });
            }
        }
        let mut m = InfluenceMatrix { n, pos, neg };
        m.clear_diagonal();
        Ok(m)
    }

    /// Builds a matrix from net influences only, splitting each entry by sign.
    pub fn from_influence(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut m = InfluenceMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if v < -T::one() || v > T::one() {
                    return Err(Error::invalid(format!("influence {v} outside [-1, 1]")));
                }
                if v > T::zero() {
                    m.pos[i * n + j] = v;
                } else {
                    m.neg[i * n + j] = -v;
                }
            }
        }
        Ok(m)
    }

    fn clear_diagonal(&mut self) {
        for i in 0..self.n {
            self.pos[i * self.n + i] = T::zero();
            self.neg[i * self.n + i] = T::zero();
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn pos(&self, i: usize, j: usize) -> T {
        self.pos[i * self.n + j]
    }

    pub fn neg(&self, i: usize, j: usize) -> T {
        self.neg[i * self.n + j]
    }

    pub fn influence(&self, i: usize, j: usize) -> T {
        self.pos(i, j) - self.neg(i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.pos
            .iter()
            .zip(&self.neg)
            .all(|(p, q)| *p == *q)
    }

    /// `(j, I(i, j))` for every `j` with non-zero net influence on row `i`.
    pub fn nonzero_row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        (0..self.n).filter_map(move |j| {
            let v = self.influence(i, j);
            (v != T::zero()).then_some((j, v))
        })
    }

    pub fn convert<U: Scalar>(&self) -> InfluenceMatrix<U> {
        let f = |v: &Vec<T>| v.iter().map(|x| U::from_f64_lossy(x.as_f64())).collect();
        InfluenceMatrix {
            n: self.n,
            pos: f(&self.pos),
            neg: f(&self.neg),
        }
    }
}

/// Max-min closure over signed walks; picks the dense or sparse kernel by size.
pub fn propagate_strengths<T: Scalar>(g: &ValueDependencyGraph<T>) -> InfluenceMatrix<T> {
    if g.len() <= DENSE_CLOSURE_LIMIT {
        closure_dense(g)
    } else {
        closure_sparse(g)
    }
}

/// Floyd-Warshall max-min closure on the 2n states `(node, sign)`.
///
/// State `2i` is "reached `r_i` with positive accumulated quality", `2i + 1` negative.
pub fn closure_dense<T: Scalar>(g: &ValueDependencyGraph<T>) -> InfluenceMatrix<T> {
    let n = g.len();
    let s = 2 * n;
    let mut d = vec![T::zero(); s * s];
    for (i, j, e) in g.edges() {
        let flip = usize::from(e.quality == Quality::Negative);
        for p in 0..2 {
            d[(2 * i + p) * s + 2 * j + (p ^ flip)] = e.strength;
        }
    }
    let mut pivot = vec![T::zero(); s];
    for k in 0..s {
        pivot.copy_from_slice(&d[k * s..(k + 1) * s]);
        d.par_chunks_mut(s).for_each(|row| {
            let through = row[k];
            if through == T::zero() {
                return;
            }
            for (cell, &p) in row.iter_mut().zip(&pivot) {
                let c = through.min_of(p);
                if c > *cell {
                    *cell = c;
                }
            }
        });
    }
    let mut pos = vec![T::zero(); n * n];
    let mut neg = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            pos[i * n + j] = d[(2 * i) * s + 2 * j];
            neg[i * n + j] = d[(2 * i) * s + 2 * j + 1];
        }
    }
    let mut m = InfluenceMatrix { n, pos, neg };
    m.clear_diagonal();
    m
}

struct Label<T>(T, usize);

impl<T: PartialOrd> PartialEq for Label<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: PartialOrd> Eq for Label<T> {}
impl<T: PartialOrd> PartialOrd for Label<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: PartialOrd> Ord for Label<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .partial_cmp(&other.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Widest-path search from every source on the signed state graph.
///
/// Same result as [`closure_dense`]; cost follows the number of reachable states
/// rather than `n³`, which suits large sparse graphs.
pub fn closure_sparse<T: Scalar>(g: &ValueDependencyGraph<T>) -> InfluenceMatrix<T> {
    let n = g.len();
    let adj = g.adjacency();
    let rows: Vec<(Vec<T>, Vec<T>)> = (0..n)
        .into_par_iter()
        .map(|src| {
            let mut best = vec![T::zero(); 2 * n];
            let mut done = vec![false; 2 * n];
            let mut heap = BinaryHeap::new();
            best[2 * src] = T::one();
            heap.push(Label(T::one(), 2 * src));
            while let Some(Label(v, state)) = heap.pop() {
                if done[state] {
                    continue;
                }
                done[state] = true;
                let (node, parity) = (state / 2, state % 2);
                for &(to, e) in &adj[node] {
                    let next = 2 * to + (parity ^ usize::from(e.quality == Quality::Negative));
                    let c = v.min_of(e.strength);
                    if !done[next] && c > best[next] {
                        best[next] = c;
                        heap.push(Label(c, next));
                    }
                }
            }
            // the source state carries the empty walk, which is not a dependency
            best[2 * src] = T::zero();
            let mut pos = Vec::with_capacity(n);
            let mut neg = Vec::with_capacity(n);
            for j in 0..n {
                pos.push(best[2 * j]);
                neg.push(best[2 * j + 1]);
            }
            (pos, neg)
        })
        .collect();
    let mut pos = Vec::with_capacity(n * n);
    let mut neg = Vec::with_capacity(n * n);
    for (p, q) in rows {
        pos.extend(p);
        neg.extend(q);
    }
    let mut m = InfluenceMatrix { n, pos, neg };
    m.clear_diagonal();
    m
}

/// Single-pass positive/negative Floyd-Warshall exactly as commonly stated for VDGs.
///
/// Kept for comparison: it can miss walks that need a pivot visited under both signs.
pub fn closure_single_pass<T: Scalar>(g: &ValueDependencyGraph<T>) -> InfluenceMatrix<T> {
    let n = g.len();
    let mut p = vec![T::zero(); n * n];
    let mut q = vec![T::zero(); n * n];
    for (i, j, e) in g.edges() {
        match e.quality {
            Quality::Positive => p[i * n + j] = e.strength,
            Quality::Negative => q[i * n + j] = e.strength,
            Quality::Unspecified => {}
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let (ik, kj, ij) = (i * n + k, k * n + j, i * n + j);
                let c = p[ik].min_of(p[kj]);
                if c > p[ij] {
                    p[ij] = c;
                }
                let c = q[ik].min_of(q[kj]);
                if c > p[ij] {
                    p[ij] = c;
                }
                let c = p[ik].min_of(q[kj]);
                if c > q[ij] {
                    q[ij] = c;
                }
                let c = q[ik].min_of(p[kj]);
                if c > q[ij] {
                    q[ij] = c;
                }
            }
        }
    }
    let mut m = InfluenceMatrix { n, pos: p, neg: q };
    m.clear_diagonal();
    m
}

/// Exhaustive search over sign-labelled walks of at most `max_len` edges.
///
/// A partial walk is abandoned only when another walk already reached the same
/// `(node, sign)` in no more steps with at least the same bottleneck, since every
/// continuation of the former is matched by the latter.
pub fn brute_force_influence<T: Scalar>(
    g: &ValueDependencyGraph<T>,
    max_len: usize,
) -> Result<InfluenceMatrix<T>> {
    let n = g.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            nodes: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let adj = g.adjacency();
    let mut m = InfluenceMatrix::zeros(n);
    for src in 0..n {
        let mut front: Vec<Vec<(usize, T)>> = vec![Vec::new(); 2 * n];
        let mut walk = Walk {
            adj: &adj,
            max_len,
            front: &mut front,
            pos: vec![T::zero(); n],
            neg: vec![T::zero(); n],
        };
        walk.extend(2 * src, 0, T::one());
        let (pos, neg) = (walk.pos, walk.neg);
        for j in 0..n {
            if j != src {
                m.pos[src * n + j] = pos[j];
                m.neg[src * n + j] = neg[j];
            }
        }
    }
    Ok(m)
}

struct Walk<'a, T> {
    adj: &'a [Vec<(usize, super::vdg::Edge<T>)>],
    max_len: usize,
    front: &'a mut Vec<Vec<(usize, T)>>,
    pos: Vec<T>,
    neg: Vec<T>,
}

impl<T: Scalar> Walk<'_, T> {
    fn extend(&mut self, state: usize, depth: usize, bottleneck: T) {
        let seen = &mut self.front[state];
        if seen.iter().any(|&(d, v)| d <= depth && v >= bottleneck) {
            return;
        }
        seen.retain(|&(d, v)| !(d >= depth && v <= bottleneck));
        seen.push((depth, bottleneck));
        let (node, parity) = (state / 2, state % 2);
        if depth > 0 {
            let slot = if parity == 0 {
                &mut self.pos[node]
            } else {
                &mut self.neg[node]
            };
            if bottleneck > *slot {
                *slot = bottleneck;
            }
        }
        if depth == self.max_len {
            return;
        }
        for &(to, e) in self.adj[node].iter() {
            let flip = usize::from(e.quality == Quality::Negative);
            self.extend(2 * to + (parity ^ flip), depth + 1, bottleneck.min_of(e.strength));
        }
    }
}
