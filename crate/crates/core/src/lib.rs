//! A tableau decision procedure for converse-PDL with regular inclusion
//! axioms.
//!
//! A problem is a pair `(X, Γ)` of formula sets together with a logic, given
//! by one finite automaton per atomic program (the words a program may be
//! rewritten to). The solver decides whether some model of the logic
//! validates `Γ` everywhere and satisfies `X` at some state.
//!
//! ```
//! use cpdlreg::{io, solve, SolveOptions, Verdict};
//!
//! let problem = io::parse_problem("goal { <s>p; [s]!p; }").unwrap();
//! let outcome = solve(&problem, &SolveOptions::default()).unwrap();
//! assert_eq!(outcome.verdict, Verdict::Unsat);
//! ```

pub mod automata;
pub mod bitset;
pub mod consistency;
pub mod error;
pub mod io;
pub mod semantics;
mod session;
mod solve;
pub mod syntax;
pub mod tableau;

pub use error::{Error, Result};
pub use session::{Problem, Session};
pub use solve::{solve, Outcome, SolveOptions, Strategy, Verdict};
pub use tableau::{Search, Stats};
