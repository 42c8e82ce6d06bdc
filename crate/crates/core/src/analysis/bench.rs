use super::synthetic::{generate_synthetic, SyntheticSpec};
use crate::error::Result;
use crate::selection_models::{build_model, BuildOptions, Method};
use crate::solver::{solve_with, SolverConfig, Status};
use std::io::Write;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub vdl: f64,
    pub nvdl: f64,
    pub pdl: f64,
    pub npdl: f64,
    pub budget_fraction: f64,
    pub seed: u64,
    /// Model construction and search, excluding instance generation.
    pub elapsed: Duration,
    pub nodes: u64,
    pub status: Status,
    pub objective: f64,
}

/// Generates and solves each instance in turn; limits end a cell, not the run.
pub fn benchmark(specs: &[SyntheticSpec], method: Method, cfg: &SolverConfig) -> Result<Vec<BenchRow>> {
    specs
        .iter()
        .map(|spec| {
            let inst = generate_synthetic(spec)?;
            let start = Instant::now();
            let model = build_model(&inst.problem, method, BuildOptions::default())?;
            let s = solve_with(&model, cfg)?;
            Ok(BenchRow {
                n: spec.n,
                vdl: spec.vdl,
                nvdl: spec.nvdl,
                pdl: spec.pdl,
                npdl: spec.npdl,
                budget_fraction: spec.budget_fraction,
                seed: spec.seed,
                elapsed: start.elapsed(),
                nodes: s.stats.nodes,
                status: s.status,
                objective: s.objective,
            })
        })
        .collect()
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "n", "vdl", "nvdl", "pdl", "npdl", "budget_fraction", "seed", "elapsed_ms", "nodes", "status",
        "objective",
    ])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.vdl.to_string(),
            r.nvdl.to_string(),
            r.pdl.to_string(),
            r.npdl.to_string(),
            r.budget_fraction.to_string(),
            r.seed.to_string(),
            format!("{:.3}", r.elapsed.as_secs_f64() * 1e3),
            r.nodes.to_string(),
            r.status.name().to_string(),
            r.objective.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
