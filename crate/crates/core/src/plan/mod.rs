//! Target sets, the out-of-range parent cover, and layered search plans.

pub mod search_plan;
pub mod target;

pub use search_plan::{
    build_exhaustive_plan, build_plan, exhaustive_char_table, CharTable, ClassEntry, PlanKind, PlanNode, SearchPlan,
};
pub use target::{
    compute_target_set, descendants, in_range, parent_cover, CoverChoice, CoverStep, ParentCover, TargetSet,
};

use crate::error::Result;
use crate::lets::{DbParams, StructureDb, TargetRange};

/// Membership-test plan for `range`, built from `db`.
pub fn targeted_plan(db: &StructureDb, range: &TargetRange) -> Result<SearchPlan> {
    let lt = compute_target_set(db, range)?;
    let cover = parent_cover(db, &lt)?;
    build_plan(db, range, &lt, &cover)
}

/// Builds a general structure database for `range` and its targeted plan.
pub fn plan_for_range(dv: usize, girth: usize, range: &TargetRange) -> Result<SearchPlan> {
    let db = StructureDb::build(&DbParams::for_range(dv, girth, range))?;
    targeted_plan(&db, range)
}
