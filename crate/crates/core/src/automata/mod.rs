//! Finite automata over simple programs and tests, and the compilation of
//! programs into them.

mod compile;
mod logic;
mod nfa;

pub use compile::{compile_closed, compile_program};
pub use logic::{LogicSpec, DEFAULT_SYMMETRY_BOUND};
pub use nfa::FiniteAutomaton;
