use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::selection_models::{build_model, BuildOptions, ConstraintMode, Method, SelectionProblem};
use crate::solver::{solve_with, SolverConfig, Status};
use crate::valuation::evaluate_selection;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::io::Write;

/// One `(price level, method)` cell. Percentages are of the total estimated value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub percent: T,
    pub method: Method,
    pub status: Status,
    pub av_pct: T,
    pub ev_pct: T,
    pub ov_pct: T,
    /// `None` when the cell is infeasible or no point was found.
    pub selection: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport<T> {
    pub requirement_ids: Vec<String>,
    pub total_value: T,
    pub rows: Vec<SweepRow<T>>,
}

/// Solves every `(percent, method)` pair under a price limit of
/// `percent / 100 × Σv` and scores each selection by AV, EV and OV.
pub fn sweep<T: Scalar>(
    p: &SelectionProblem<T>,
    percents: &[T],
    methods: &[Method],
    cfg: &SolverConfig,
) -> Result<SweepReport<T>> {
    let total = p.total_value();
    if total <= T::zero() {
        return Err(Error::invalid("total value must be positive"));
    }
    let hundred = T::from_usize_lossy(100);
    let influence = p.influence_or_zero();
    let base = SelectionProblem {
        mode: ConstraintMode::PriceValue,
        influence: Some(influence.clone()),
        ..p.clone()
    };
    let cells: Vec<(T, Method)> = percents
        .iter()
        .flat_map(|&pc| methods.iter().map(move |&m| (pc, m)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(percent, method)| -> Result<SweepRow<T>> {
            let problem = base.with_bound(percent / hundred * total);
            let model = build_model(&problem, method, BuildOptions::default())?;
            let s = solve_with(&model, cfg)?;
            if !s.has_point() {
                return Ok(SweepRow {
                    percent,
                    method,
                    status: s.status,
                    av_pct: T::zero(),
                    ev_pct: T::zero(),
                    ov_pct: T::zero(),
                    selection: None,
                });
            }
            let e = evaluate_selection(&problem.requirements, &influence, &s.x)?;
            let pct = |v: T| hundred * v / total;
            Ok(SweepRow {
                percent,
                method,
                status: s.status,
                av_pct: pct(e.av),
                ev_pct: pct(e.ev),
                ov_pct: pct(e.ov),
                selection: Some(s.x),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        requirement_ids: p.ids(),
        total_value: total,
        rows,
    })
}

impl<T: Scalar> SweepReport<T> {
    pub fn rows_for(&self, method: Method) -> impl Iterator<Item = &SweepRow<T>> {
        self.rows.iter().filter(move |r| r.method == method)
    }

    /// `percent,method,status,av_pct,ev_pct,ov_pct,selected`.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["percent", "method", "status", "av_pct", "ev_pct", "ov_pct", "selected"])?;
        for r in &self.rows {
            w.write_record([
                r.percent.as_f64().to_string(),
                r.method.to_string(),
                r.status.name().to_string(),
                r.av_pct.as_f64().to_string(),
                r.ev_pct.as_f64().to_string(),
                r.ov_pct.as_f64().to_string(),
                self.selected_ids(r).join(" "),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Plot-ready `level,method,metric,value`.
    pub fn write_long<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["level", "method", "metric", "value"])?;
        for r in &self.rows {
            for (metric, v) in [("av_pct", r.av_pct), ("ev_pct", r.ev_pct), ("ov_pct", r.ov_pct)] {
                w.write_record([
                    r.percent.as_f64().to_string(),
                    r.method.to_string(),
                    metric.to_string(),
                    v.as_f64().to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "total_value": self.total_value.as_f64(),
            "rows": self.rows.iter().map(|r| json!({
                "percent": r.percent.as_f64(),
                "method": r.method.to_string(),
                "status": r.status.name(),
                "av_pct": r.av_pct.as_f64(),
                "ev_pct": r.ev_pct.as_f64(),
                "ov_pct": r.ov_pct.as_f64(),
                "selected": self.selected_ids(r),
            })).collect::<Vec<_>>(),
        })
    }

    fn selected_ids(&self, r: &SweepRow<T>) -> Vec<String> {
        r.selection
            .as_ref()
            .map(|x| {
                x.iter()
                    .zip(&self.requirement_ids)
                    .filter(|(s, _)| **s)
                    .map(|(_, id)| id.clone())
                    .collect()
            })
            .unwrap_or_default()
    }
}
