//! Finite simplified morasses and the forcing hierarchies built along them.
//!
//! The crate works with "fake" morasses: every level is a finite ordinal and
//! every family of maps is finite, so each axiom and lemma can be checked by
//! exhaustive enumeration.

pub mod chain;
pub mod error;
pub mod fixtures;
pub mod fs;
pub mod gap1;
pub mod gap2;
pub mod mutate;
pub mod order;
pub mod report;
pub mod suites;
pub mod topology;

pub use error::{Error, Result};
pub use gap1::{FakeGap1Morass, MorassTree, Vertex};
pub use gap2::{BarDecomposition, FakeGap2Morass, Gap1Embedding};
pub use order::OrdMap;
pub use report::{Check, Report, Verdict};
