//! Causal strengths between requirements from co-selection records.

use crate::dependency_graph::{Quality, ValueDependencyGraph};
use crate::error::{Error, Result};
use crate::preferences::PreferenceMatrix;
use rayon::prelude::*;

/// Co-occurrence tallies and Eells measures for every ordered requirement pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalAnalysis {
    pub requirement_ids: Vec<String>,
    pub n: usize,
    pub users: usize,
    /// `n × 2n`, row-major. `counts[i][j]` counts users selecting both `r_i` and `r_j`,
    /// `counts[i][j + n]` users selecting `r_i` while ignoring `r_j`.
    pub counts: Vec<usize>,
    cond_pos: Vec<Option<f64>>,
    cond_neg: Vec<Option<f64>>,
    eells: Vec<f64>,
}

impl CausalAnalysis {
    pub fn together(&self, i: usize, j: usize) -> usize {
        self.counts[i * 2 * self.n + j]
    }

    pub fn without(&self, i: usize, j: usize) -> usize {
        self.counts[i * 2 * self.n + j + self.n]
    }

    pub fn selected(&self, i: usize) -> usize {
        self.together(i, i)
    }

    /// `p(r_i | r_j)`, absent when `r_j` is never selected.
    pub fn cond_pos(&self, i: usize, j: usize) -> Option<f64> {
        self.cond_pos[i * self.n + j]
    }

    /// `p(r_i | not r_j)`, absent when `r_j` is always selected.
    pub fn cond_neg(&self, i: usize, j: usize) -> Option<f64> {
        self.cond_neg[i * self.n + j]
    }

    /// Both conditionals exist and `i != j`.
    pub fn is_defined(&self, i: usize, j: usize) -> bool {
        i != j && self.cond_pos(i, j).is_some() && self.cond_neg(i, j).is_some()
    }

    /// Eells measure `p(r_i|r_j) - p(r_i|¬r_j)`; 0 on the diagonal and where undefined.
    pub fn eells(&self, i: usize, j: usize) -> f64 {
        self.eells[i * self.n + j]
    }

    /// 2×2 table `(n11, n10, n01, n00)` for `r_i` against `r_j`.
    pub fn table(&self, i: usize, j: usize) -> [usize; 4] {
        let n11 = self.together(i, j);
        let n10 = self.without(i, j);
        let n01 = self.selected(j) - n11;
        let n00 = self.users - n11 - n10 - n01;
        [n11, n10, n01, n00]
    }
}

pub fn compute_eells(m: &PreferenceMatrix) -> CausalAnalysis {
    let n = m.requirements();
    let k = m.users();
    let counts: Vec<usize> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let ri = m.row(i);
            let mut row = vec![0usize; 2 * n];
            for j in 0..n {
                let rj = m.row(j);
                let (mut both, mut only) = (0, 0);
                for (a, b) in ri.iter().zip(rj) {
                    if *a == 1 {
                        if *b == 1 {
                            both += 1;
                        } else {
                            only += 1;
                        }
                    }
                }
                row[j] = both;
                row[j + n] = only;
            }
            row
        })
        .collect();
    let mut cond_pos = vec![None; n * n];
    let mut cond_neg = vec![None; n * n];
    let mut eells = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let sel_j = counts[j * 2 * n + j];
            let p = (sel_j > 0).then(|| counts[i * 2 * n + j] as f64 / sel_j as f64);
            let q = (sel_j < k).then(|| counts[i * 2 * n + j + n] as f64 / (k - sel_j) as f64);
            cond_pos[i * n + j] = p;
            cond_neg[i * n + j] = q;
            if i != j {
                if let (Some(p), Some(q)) = (p, q) {
                    eells[i * n + j] = p - q;
                }
            }
        }
    }
    CausalAnalysis {
        requirement_ids: m.requirement_ids().to_vec(),
        n,
        users: k,
        counts,
        cond_pos,
        cond_neg,
        eells,
    }
}

/// Critical value for the odds-ratio confidence interval.
#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceConfig {
    pub z_prime: f64,
    pub confidence_label: String,
}

impl Default for SignificanceConfig {
    fn default() -> Self {
        SignificanceConfig {
            z_prime: 1.96,
            confidence_label: "95%".into(),
        }
    }
}

impl SignificanceConfig {
    pub fn new(z_prime: f64) -> Result<Self> {
        if !(z_prime > 0.0) {
            return Err(Error::invalid(format!("z' must be positive, got {z_prime}")));
        }
        Ok(SignificanceConfig {
            z_prime,
            confidence_label: format!("z'={z_prime}"),
        })
    }
}

/// Cut points of the piecewise-linear map from |η| to strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipConfig {
    pub lower: f64,
    pub upper: f64,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        MembershipConfig {
            lower: 0.0,
            upper: 1.0,
        }
    }
}

impl MembershipConfig {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(0.0 <= lower && lower <= upper && upper <= 1.0) {
            return Err(Error::invalid(format!(
                "membership cuts must satisfy 0 <= a <= b <= 1, got ({lower}, {upper})"
            )));
        }
        Ok(MembershipConfig { lower, upper })
    }
}

/// Odds ratio from a 2×2 table `(n11, n10, n01, n00)`, with 0.5 added to every
/// cell when any cell is empty.
pub fn odds_ratio_from_table(table: [usize; 4]) -> f64 {
    let c = corrected(table);
    (c[0] * c[3]) / (c[1] * c[2])
}

fn corrected(table: [usize; 4]) -> [f64; 4] {
    let shift = if table.contains(&0) { 0.5 } else { 0.0 };
    table.map(|v| v as f64 + shift)
}

pub fn odds_ratio(a: &CausalAnalysis, i: usize, j: usize) -> Result<f64> {
    check_pair(a, i, j)?;
    Ok(odds_ratio_from_table(a.table(i, j)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Significance {
    pub odds_ratio: f64,
    pub lower: f64,
    pub upper: f64,
    pub significant: bool,
}

/// Woolf interval for the odds ratio of a 2×2 table, on the ratio scale.
pub fn woolf_interval(table: [usize; 4], z_prime: f64) -> Significance {
    let c = corrected(table);
    let u: f64 = c.iter().sum();
    let omega = (c[0] * c[3]) / (c[1] * c[2]);
    let radical = c.iter().map(|&v| u / v).sum::<f64>().sqrt();
    let half = z_prime / u.sqrt() * radical;
    let ln = omega.ln();
    let lower = (ln - half).exp();
    let upper = (ln + half).exp();
    Significance {
        odds_ratio: omega,
        lower,
        upper,
        significant: !(lower <= 1.0 && upper >= 1.0),
    }
}

pub fn significance_test(
    a: &CausalAnalysis,
    i: usize,
    j: usize,
    cfg: &SignificanceConfig,
) -> Result<Significance> {
    check_pair(a, i, j)?;
    if a.users == 0 {
        return Err(Error::invalid("no users"));
    }
    Ok(woolf_interval(a.table(i, j), cfg.z_prime))
}

fn check_pair(a: &CausalAnalysis, i: usize, j: usize) -> Result<()> {
    if i >= a.n || j >= a.n {
        return Err(Error::invalid(format!("pair ({i},{j}) out of range")));
    }
    if i == j {
        return Err(Error::invalid("odds ratio needs two distinct requirements"));
    }
    Ok(())
}

pub fn membership(eta: f64, cfg: &MembershipConfig) -> f64 {
    let s = eta.abs();
    if s <= cfg.lower {
        0.0
    } else if s >= cfg.upper {
        1.0
    } else {
        (s - cfg.lower) / (cfg.upper - cfg.lower)
    }
}

/// Per-pair outcome of the identification pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub from: usize,
    pub to: usize,
    pub eells: f64,
    pub defined: bool,
    pub significance: Significance,
    pub strength: f64,
}

pub fn pair_reports(
    a: &CausalAnalysis,
    sig: &SignificanceConfig,
    mem: &MembershipConfig,
) -> Vec<PairReport> {
    let mut out = Vec::with_capacity(a.n * a.n.saturating_sub(1));
    for i in 0..a.n {
        for j in 0..a.n {
            if i == j {
                continue;
            }
            let significance = woolf_interval(a.table(i, j), sig.z_prime);
            let defined = a.is_defined(i, j);
            let eta = a.eells(i, j);
            let strength = if defined && significance.significant {
                membership(eta, mem)
            } else {
                0.0
            };
            out.push(PairReport {
                from: i,
                to: j,
                eells: eta,
                defined,
                significance,
                strength,
            });
        }
    }
    out
}

/// Explicit value dependencies: one edge per significant, defined pair with
/// non-zero strength, signed like η.
pub fn build_vdg(
    a: &CausalAnalysis,
    sig: &SignificanceConfig,
    mem: &MembershipConfig,
) -> ValueDependencyGraph<f64> {
    let mut g = ValueDependencyGraph::new(a.requirement_ids.clone())
        .unwrap_or_else(|_| ValueDependencyGraph::with_size(a.n));
    for r in pair_reports(a, sig, mem) {
        if r.strength > 0.0 && r.eells != 0.0 {
            let q = if r.eells > 0.0 {
                Quality::Positive
            } else {
                Quality::Negative
            };
            g.add_edge(r.from, r.to, r.strength, q)
                .expect("strength lies in (0, 1]");
        }
    }
    g
}
