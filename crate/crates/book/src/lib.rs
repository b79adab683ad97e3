//! Guide chapters, compiled as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/problems.md")]
pub mod problems {}
#[doc = include_str!("../../../book/src/formulas.md")]
pub mod formulas {}
#[doc = include_str!("../../../book/src/logics.md")]
pub mod logics {}
#[doc = include_str!("../../../book/src/tableau.md")]
pub mod tableau {}
#[doc = include_str!("../../../book/src/consistency.md")]
pub mod consistency {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
