//! Compiles a selection problem into BK, PCBK, SBK, increase-decrease or the
//! dependency-aware 0/1 program, and writes LP files.

mod build;
mod lp;
mod model;
mod problem;

pub use build::{build_increase_decrease, build_model, BuildOptions};
pub use lp::{export_lp, lp_string};
pub use model::{
    Constraint, LinearModel, Method, ModelKind, ModelMeta, PenaltyLayout, Relation, Sense,
    VarKind, Variable,
};
pub use problem::{ConstraintMode, SelectionProblem, SubsetEstimate};
