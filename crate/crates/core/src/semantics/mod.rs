//! Kripke models, model checking, a brute-force satisfiability oracle, and
//! model extraction from tableaux.

mod bounded;
mod eval;
mod extract;
mod kripke;

pub use bounded::bounded_sat;
pub use eval::{eval, valid, Evaluator};
pub use extract::{check_model, extract_model, ModelGraph, World};
pub use kripke::{close_model, KripkeModel, Relation};
