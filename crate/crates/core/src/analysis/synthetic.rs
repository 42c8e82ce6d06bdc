use crate::dependency_graph::{
    propagate_strengths, Precedence, PrecedenceGraph, Quality, ValueDependencyGraph,
};
use crate::error::{Error, Result};
use crate::selection_models::{ConstraintMode, SelectionProblem};
use crate::valuation::Requirement;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Target densities and attribute ranges for a random instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub vdl: f64,
    pub nvdl: f64,
    pub pdl: f64,
    pub npdl: f64,
    pub cost_range: (f64, f64),
    pub value_range: (f64, f64),
    pub probability_range: (f64, f64),
    /// Budget as a share of the total cost.
    pub budget_fraction: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        SyntheticSpec {
            n,
            vdl: 0.0,
            nvdl: 0.0,
            pdl: 0.0,
            npdl: 0.0,
            cost_range: (1.0, 10.0),
            value_range: (1.0, 20.0),
            probability_range: (0.0, 1.0),
            budget_fraction: 0.5,
            seed,
        }
    }

    pub fn with_levels(mut self, vdl: f64, nvdl: f64, pdl: f64, npdl: f64) -> Self {
        self.vdl = vdl;
        self.nvdl = nvdl;
        self.pdl = pdl;
        self.npdl = npdl;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid("synthetic instances need at least two requirements"));
        }
        for (name, v) in [("VDL", self.vdl), ("NVDL", self.nvdl), ("PDL", self.pdl), ("NPDL", self.npdl)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if self.nvdl > 0.0 && self.vdl == 0.0 {
            return Err(Error::invalid("NVDL > 0 needs VDL > 0"));
        }
        if self.npdl > 0.0 && self.pdl == 0.0 {
            return Err(Error::invalid("NPDL > 0 needs PDL > 0"));
        }
        for (name, (lo, hi)) in [
            ("cost", self.cost_range),
            ("value", self.value_range),
            ("probability", self.probability_range),
        ] {
            if !(lo <= hi) || lo < 0.0 {
                return Err(Error::invalid(format!("{name} range [{lo}, {hi}] is empty or negative")));
            }
        }
        if self.probability_range.1 > 1.0 {
            return Err(Error::invalid("probabilities cannot exceed 1"));
        }
        if !(0.0..=1.0).contains(&self.budget_fraction) {
            return Err(Error::invalid("budget fraction outside [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticInstance {
    pub problem: SelectionProblem<f64>,
    pub vdg: ValueDependencyGraph<f64>,
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Ordered pair `(i, j)`, `i != j`, with the given rank among all `n(n-1)` pairs.
fn pair(rank: usize, n: usize) -> (usize, usize) {
    let i = rank / (n - 1);
    let r = rank % (n - 1);
    (i, if r >= i { r + 1 } else { r })
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticInstance> {
    spec.validate()?;
    let n = spec.n;
    let pairs = n * (n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let reqs: Vec<Requirement<f64>> = (1..=n)
        .map(|i| Requirement {
            id: format!("r{i}"),
            name: format!("r{i}"),
            cost: uniform(&mut rng, spec.cost_range),
            value: uniform(&mut rng, spec.value_range),
            probability: uniform(&mut rng, spec.probability_range),
        })
        .collect();

    let k = (spec.vdl * pairs as f64).round() as usize;
    let chosen = index::sample(&mut rng, pairs, k).into_vec();
    let negatives = (spec.nvdl * k as f64).round() as usize;
    let mut negative = vec![false; k];
    for e in index::sample(&mut rng, k, negatives) {
        negative[e] = true;
    }
    let mut vdg = ValueDependencyGraph::with_size(n);
    for (e, &rank) in chosen.iter().enumerate() {
        let (i, j) = pair(rank, n);
        let strength = 1.0 - rng.random::<f64>();
        let quality = if negative[e] {
            Quality::Negative
        } else {
            Quality::Positive
        };
        vdg.add_edge(i, j, strength, quality)?;
    }

    let kp = (spec.pdl * pairs as f64).round() as usize;
    let chosen = index::sample(&mut rng, pairs, kp).into_vec();
    let conflicts = (spec.npdl * kp as f64).round() as usize;
    let mut conflict = vec![false; kp];
    for e in index::sample(&mut rng, kp, conflicts) {
        conflict[e] = true;
    }
    let mut prec = PrecedenceGraph::with_size(n);
    for (e, &rank) in chosen.iter().enumerate() {
        let (i, j) = pair(rank, n);
        prec.add(if conflict[e] {
            Precedence::Conflicts { a: i, b: j }
        } else {
            Precedence::RequiresAll { source: i, target: j }
        })?;
    }

    let budget = spec.budget_fraction * reqs.iter().map(|r| r.cost).sum::<f64>();
    let influence = propagate_strengths(&vdg);
    let problem = SelectionProblem::new(reqs, budget, ConstraintMode::BudgetCost)?
        .with_precedence(prec)?
        .with_influence(influence)?;
    Ok(SyntheticInstance { problem, vdg })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_ranks_cover_all_ordered_pairs() {
        let n = 5;
        let mut seen = std::collections::HashSet::new();
        for r in 0..n * (n - 1) {
            let (i, j) = pair(r, n);
            assert!(i != j && i < n && j < n);
            seen.insert((i, j));
        }
        assert_eq!(seen.len(), n * (n - 1));
    }

    #[test]
    fn contradictory_targets() {
        let s = SyntheticSpec::new(5, 1).with_levels(0.0, 0.5, 0.0, 0.0);
        assert!(generate_synthetic(&s).is_err());
        let s = SyntheticSpec::new(5, 1).with_levels(0.0, 0.0, 0.0, 0.5);
        assert!(generate_synthetic(&s).is_err());
    }
}
