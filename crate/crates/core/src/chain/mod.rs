//! The chain forcing along a gap-1 morass: conditions are finite 0/1
//! rectangles, thinned so that every row is monotone along the morass maps.

pub mod checks;
pub mod cond;
pub mod generic;
pub mod hierarchy;
pub mod star;

pub use checks::{chain_suite, p_beta_family, ChainScope};
pub use cond::{chain_leq, ChainCondition};
pub use generic::{default_chain_sets, generic_chain, ChainDense, ChainGenericConfig, GenericChain, PairSummary};
pub use hierarchy::{thinned_membership, ChainHierarchy, MonotoneViolation};
pub use star::{merge_conditions, LocalStarForm};
