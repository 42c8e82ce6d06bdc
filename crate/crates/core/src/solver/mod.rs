//! Exact branch-and-bound for the compiled 0/1 models.
//!
//! Binaries are enumerated implicitly; continuous variables take the smallest
//! values their rows allow, which is optimal because they only carry
//! non-positive objective coefficients (penalties).

mod bnb;
mod prepare;
mod verify;

pub use bnb::{solve, solve_with, Solution, SolveStats, SolverConfig, Status};
pub use verify::{verify_solution, VerificationReport, Violation};

use crate::scalar::Scalar;
use serde_json::{json, Map, Value};

/// `{"status", "selected", "objective", "theta", "stats"}`; elapsed time only on request
/// so that repeated runs produce identical output.
pub fn solution_json<T: Scalar>(s: &Solution<T>, ids: &[String], with_timing: bool) -> Value {
    let selected: Vec<&String> = s.selected().into_iter().map(|i| &ids[i]).collect();
    let mut stats = Map::new();
    stats.insert("nodes".into(), json!(s.stats.nodes));
    stats.insert(
        "root_bound".into(),
        s.stats.root_bound.map_or(Value::Null, |b| json!(b.as_f64())),
    );
    if with_timing {
        stats.insert("elapsed_ms".into(), json!(s.stats.elapsed.as_secs_f64() * 1e3));
    }
    let mut out = Map::new();
    out.insert("status".into(), json!(s.status.name()));
    out.insert("selected".into(), json!(selected));
    out.insert("objective".into(), json!(s.objective.as_f64()));
    if let Some(theta) = &s.theta {
        let t: Map<String, Value> = ids
            .iter()
            .zip(theta)
            .map(|(id, v)| (id.clone(), json!(v.as_f64())))
            .collect();
        out.insert("theta".into(), Value::Object(t));
    }
    out.insert("stats".into(), Value::Object(stats));
    Value::Object(out)
}
