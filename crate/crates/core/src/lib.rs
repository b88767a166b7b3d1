//! Colored unit cubes and the 2×2×2 solids they build.
//!
//! A cube has its six faces painted in six different colors; up to rotation
//! there are 30 kinds ([`Variety`]). An [`Instance`] is a multiset of cubes.
//! [`composability`] decides which solids an instance can build, [`model`]
//! states search questions over instances as constraint models, and
//! [`search`] solves them. [`experiments`] packages the standard runs.
//!
//! ```
//! use eightblocks::composability::solution_set;
//! use eightblocks::experiments::universal_12;
//!
//! assert_eq!(solution_set(&universal_12()).len(), 30);
//! ```
//!
//! The guide in `book/` walks through the concepts; its snippets run as
//! doctests of this crate.

pub mod composability;
pub mod cube;
pub mod error;
pub mod experiments;
pub mod instance;
pub mod model;
pub mod search;
pub mod symmetry;
pub mod table;
pub mod variety;

pub use error::{Error, Result};
pub use instance::Instance;
pub use symmetry::Symmetry;
pub use variety::Variety;

// Book chapters, checked by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/varieties.md")]
    mod varieties {}
    #[doc = include_str!("../../../book/src/composability.md")]
    mod composability {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
