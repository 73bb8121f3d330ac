//! Compiles the snippets in `book/src` as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/parsing.md")]
pub mod parsing {}
#[doc = include_str!("../../../book/src/catalog.md")]
pub mod catalog {}
#[doc = include_str!("../../../book/src/dataflow.md")]
pub mod dataflow {}
#[doc = include_str!("../../../book/src/mining.md")]
pub mod mining {}
#[doc = include_str!("../../../book/src/patterns.md")]
pub mod patterns {}
#[doc = include_str!("../../../book/src/migrating.md")]
pub mod migrating {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
