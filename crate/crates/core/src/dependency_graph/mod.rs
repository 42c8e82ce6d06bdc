//! Value dependency graphs, precedence graphs and strength propagation.

mod closure;
mod io;
mod precedence;
mod vdg;

pub use closure::{
    brute_force_influence, closure_dense, closure_single_pass, closure_sparse, propagate_strengths,
    InfluenceMatrix, BRUTE_FORCE_LIMIT, DENSE_CLOSURE_LIMIT,
};
pub use io::{load_influence_csv, load_vdg_csv, write_influence_csv, write_influence_long, write_vdg_csv};
pub use precedence::{Precedence, PrecedenceGraph};
pub use vdg::{Edge, Quality, ValueDependencyGraph};
