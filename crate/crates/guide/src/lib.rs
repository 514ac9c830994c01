//! Runs the listings of the book in `book/src` as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}

#[doc = include_str!("../../../book/src/entropies.md")]
pub mod entropies {}

#[doc = include_str!("../../../book/src/majorization.md")]
pub mod majorization {}

#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
