//! Reading and writing problems, models and graphs.
//!
//! A problem file has an optional `logic` block and any number of
//! `assumptions` and `goal` blocks:
//!
//! ```text
//! logic {
//!   atoms: s, r;
//!   automaton r { states: 0 1; initial: 0; final: 1;
//!                 trans: 0 -s^-> 0; 0 -s-> 1; 0 -r-> 1; }
//! }
//! goal { <s>(p & [r]!p); }
//! ```
//!
//! An atom can instead be given by `regex r = (s^)* ; (s + r);`. Atoms
//! without an automaton only imply themselves. When a logic block is
//! present, every program used in a formula has to be declared in it.

mod dot;
mod lexer;
mod model_text;
mod parser;
mod print;

pub use dot::tableau_to_dot;
pub use model_text::{read_model, write_model};
pub use parser::{parse_formula, parse_problem, parse_program};
pub use print::print_problem;
