//! Cohen-style conditions along a gap-2 morass and the generic space they add.

pub mod checks;
pub mod cond;
pub mod generic;
pub mod hierarchy;
pub mod separate;

pub use checks::{antichain_contrast, topology_suite, SuiteScope};
pub use cond::{Rect, TensorMap, TopCondition};
pub use generic::{default_dense_sets, generic_space, DenseSet, GenericConfig, GenericSpace};
pub use hierarchy::{bar_image, level_tensor, naive_image, QCondition, QSystem, ScaleProfile, Thinned, TopologyHierarchy};
pub use separate::{Constructed, Separation, SeparationCase};
