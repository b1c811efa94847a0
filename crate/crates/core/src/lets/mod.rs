//! LETS structures: normal graphs, expansions, canonical labels, edge
//! colouring and structure databases.

pub mod canon;
pub mod coloring;
pub mod db;
pub mod expand;
pub mod graph;
pub mod range;

pub use canon::{canonical_certificate, canonical_form, canonical_labeling, Certificate};
pub use coloring::{chromatic_index, is_overfull};
pub use db::{enumerate_structures, DbEdge, DbParams, LetsStructure, StructureDb};
pub use expand::{apply, apply_dot, apply_lo, apply_pa, Expansion, ExpansionKind};
pub use graph::{class_of, BitIter, NormalGraph, MAX_NODES};
pub use range::{Rect, TargetRange};
