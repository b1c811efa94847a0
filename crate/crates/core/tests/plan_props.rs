//! Target-set minimality and plan completeness.

use std::collections::BTreeSet;

use qclets::lets::{DbParams, StructureDb, TargetRange};
use qclets::plan::{build_exhaustive_plan, build_plan, compute_target_set, descendants, in_range, parent_cover};

fn check(dv: usize, girth: usize, range: &str) {
    let range: TargetRange = range.parse().unwrap();
    let db = StructureDb::build(&DbParams::for_range(dv, girth, &range)).unwrap();
    let lt = compute_target_set(&db, &range).unwrap();
    let targets: BTreeSet<usize> = lt.members.iter().copied().collect();

    // Minimal: no target descends from another; complete: every in-range
    // structure is a target or descends from one.
    let mut reached = targets.clone();
    for &t in &targets {
        let d = descendants(&db, t);
        assert!(d.is_disjoint(&targets), "target {t} has a target descendant");
        reached.extend(d);
    }
    for id in in_range(&db, &range) {
        assert!(reached.contains(&id), "in-range structure {id} not covered");
    }

    let cover = parent_cover(&db, &lt).unwrap();
    let plan = build_plan(&db, &range, &lt, &cover).unwrap();
    let plan_targets: BTreeSet<_> = plan.targets().into_iter().map(|i| plan.nodes[i].cert.clone()).collect();
    let want: BTreeSet<_> = targets.iter().map(|&t| db.get(t).cert.clone()).collect();
    assert_eq!(plan_targets, want);
    check_forest(&db, &plan);

    let ex = build_exhaustive_plan(&db, &range).unwrap();
    let got: BTreeSet<_> = ex.targets().into_iter().map(|i| ex.nodes[i].cert.clone()).collect();
    let all: BTreeSet<_> = in_range(&db, &range)
        .into_iter()
        .map(|i| db.get(i).cert.clone())
        .collect();
    assert_eq!(got, all);
    check_forest(&db, &ex);
}

/// Roots are cycles, and every other node hangs off a plan parent through
/// an expansion recorded in the database.
fn check_forest(db: &StructureDb, plan: &qclets::plan::SearchPlan) {
    for n in &plan.nodes {
        let id = db.id_of(&n.cert).unwrap();
        match n.parent {
            None => assert!(n.is_cycle && db.get(id).is_cycle()),
            Some((p, e)) => {
                let pid = db.id_of(&plan.nodes[p].cert).unwrap();
                assert!(db.child_edges(pid).any(|x| x.child == id && x.expansion == e));
            }
        }
    }
}

#[test]
fn dv3_g8() {
    check(3, 8, "12:3");
    check(3, 8, "10:3;12:2");
}

#[test]
fn dv3_g6() {
    check(3, 6, "9:2");
}

#[test]
fn dv4_g6() {
    check(4, 6, "7:5");
}
