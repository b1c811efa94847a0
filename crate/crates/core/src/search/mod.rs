//! Instance-level LETS search in Tanner graphs.

pub mod cycles;
pub mod engine;
pub mod expand;
pub mod instance;

pub use cycles::{enumerate_cycles, Seeds};
pub use engine::{
    count_plan_instances, exhaustive_enumerate, layered_find, run_exhaustive, ClassCounts, SearchConfig, Verdict,
    Witness,
};
pub use expand::expand_instance;
pub use instance::{orbit_representative, shift_vars, LetsInstance};
