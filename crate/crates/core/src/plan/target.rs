//! Minimal target sets and the greedy out-of-range parent cover.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::lets::{Expansion, StructureDb, TargetRange};

/// Structures whose elimination eliminates every in-range structure,
/// grouped by size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSet {
    /// Database ids, sorted by `(a, b, id)`.
    pub members: Vec<usize>,
}

impl TargetSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Distinct sizes `a_1 < ... < a_eta`.
    pub fn sizes(&self, db: &StructureDb) -> Vec<usize> {
        let s: BTreeSet<usize> = self.members.iter().map(|&i| db.get(i).a).collect();
        s.into_iter().collect()
    }

    pub fn of_size(&self, db: &StructureDb, a: usize) -> Vec<usize> {
        self.members.iter().copied().filter(|&i| db.get(i).a == a).collect()
    }
}

fn check_coverage(db: &StructureDb, range: &TargetRange) -> Result<()> {
    if range.a_max() > db.a_max || range.b_max() > db.b_max_search {
        return Err(Error::DbInsufficient(format!(
            "range {range} exceeds database bounds a<={}, b<={}",
            db.a_max, db.b_max_search
        )));
    }
    Ok(())
}

/// In-range structure ids, in database order.
pub fn in_range(db: &StructureDb, range: &TargetRange) -> Vec<usize> {
    (0..db.len())
        .filter(|&i| {
            let s = db.get(i);
            range.contains(s.a, s.b)
        })
        .collect()
}

/// All descendants of `id` (excluding itself) through database edges.
pub fn descendants(db: &StructureDb, id: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for e in db.child_edges(x) {
            if out.insert(e.child) {
                stack.push(e.child);
            }
        }
    }
    out
}

/// Walks sizes upward and keeps each in-range structure that is not a
/// descendant of a structure kept earlier.
pub fn compute_target_set(db: &StructureDb, range: &TargetRange) -> Result<TargetSet> {
    check_coverage(db, range)?;
    let mut covered = vec![false; db.len()];
    let mut members = Vec::new();
    for id in in_range(db, range) {
        if covered[id] {
            continue;
        }
        members.push(id);
        for d in descendants(db, id) {
            covered[d] = true;
        }
    }
    Ok(TargetSet { members })
}

/// One selected parent and the structures it is responsible for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverChoice {
    pub parent: usize,
    pub covers: Vec<(usize, Expansion)>,
}

/// One step of the backward recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverStep {
    /// Structures that needed a parent (cycles excluded).
    pub s: Vec<usize>,
    /// Selected parents, in selection order.
    pub chosen: Vec<CoverChoice>,
}

impl CoverStep {
    /// Selected parents as `(a, b) -> count`.
    pub fn chosen_by_class(&self, db: &StructureDb) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for c in &self.chosen {
            *m.entry(db.get(c.parent).class()).or_insert(0) += 1;
        }
        m
    }

    /// Members of `s` as `(a, b) -> count`.
    pub fn s_by_class(&self, db: &StructureDb) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for &x in &self.s {
            *m.entry(db.get(x).class()).or_insert(0) += 1;
        }
        m
    }
}

/// Trace of the out-of-range parent selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentCover {
    pub steps: Vec<CoverStep>,
}

impl ParentCover {
    /// Union of all selected parents.
    pub fn all_parents(&self) -> BTreeSet<usize> {
        self.steps
            .iter()
            .flat_map(|s| s.chosen.iter().map(|c| c.parent))
            .collect()
    }

    /// Cycle lengths among the selected parents.
    pub fn root_lengths(&self, db: &StructureDb) -> BTreeSet<usize> {
        self.all_parents()
            .into_iter()
            .filter(|&p| db.get(p).is_cycle())
            .map(|p| db.get(p).a)
            .collect()
    }
}

/// Backward recursion over target sizes, largest first. At each step the
/// candidate parents of the current set are grouped by class, classes are
/// visited by ascending `(a, b)`, and within a class the structure with the
/// most direct children still uncovered is taken until none helps.
///
/// Selected parents that are not cycles are carried into the next step;
/// after the smallest size the recursion continues until only cycles remain.
pub fn parent_cover(db: &StructureDb, lt: &TargetSet) -> Result<ParentCover> {
    let mut sizes = lt.sizes(db);
    sizes.reverse();
    let mut steps = Vec::new();
    let mut carried: Vec<usize> = Vec::new();
    let mut k = 0;
    while k < sizes.len() || carried.iter().any(|&x| !db.get(x).is_cycle()) {
        let mut s: BTreeSet<usize> = carried.iter().copied().filter(|&x| !db.get(x).is_cycle()).collect();
        if k < sizes.len() {
            s.extend(lt.of_size(db, sizes[k]).into_iter().filter(|&x| !db.get(x).is_cycle()));
        }
        k += 1;
        let step = greedy_cover(db, &s, &BTreeSet::new())?;
        carried = step.chosen.iter().map(|c| c.parent).collect();
        steps.push(step);
    }
    Ok(ParentCover { steps })
}

/// Greedy cover of `s` by direct parents, with class priority by `(a, b)`.
/// Parents in `exclude` are never selected.
pub(crate) fn greedy_cover(db: &StructureDb, s: &BTreeSet<usize>, exclude: &BTreeSet<usize>) -> Result<CoverStep> {
    let mut remaining = s.clone();
    let mut candidates: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for &x in s {
        for e in db.parent_edges(x) {
            if !exclude.contains(&e.parent) {
                candidates.entry(db.get(e.parent).class()).or_default().insert(e.parent);
            }
        }
    }
    let mut chosen = Vec::new();
    'classes: for (_, mut gamma) in candidates {
        while !remaining.is_empty() {
            let best = gamma
                .iter()
                .map(|&p| (count_children(db, p, &remaining), p))
                .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
            let Some((n, p)) = best else { continue 'classes };
            if n == 0 {
                continue 'classes;
            }
            gamma.remove(&p);
            let mut covers: BTreeMap<usize, Expansion> = BTreeMap::new();
            for e in db.child_edges(p) {
                if remaining.contains(&e.child) {
                    let slot = covers.entry(e.child).or_insert(e.expansion);
                    if e.expansion < *slot {
                        *slot = e.expansion;
                    }
                }
            }
            for c in covers.keys() {
                remaining.remove(c);
            }
            chosen.push(CoverChoice {
                parent: p,
                covers: covers.into_iter().collect(),
            });
        }
        break;
    }
    if !remaining.is_empty() {
        return Err(Error::DbInsufficient(format!(
            "{} structures have no parent in the database",
            remaining.len()
        )));
    }
    Ok(CoverStep {
        s: s.iter().copied().collect(),
        chosen,
    })
}

fn count_children(db: &StructureDb, p: usize, remaining: &BTreeSet<usize>) -> usize {
    let kids: BTreeSet<usize> = db
        .child_edges(p)
        .map(|e| e.child)
        .filter(|c| remaining.contains(c))
        .collect();
    kids.len()
}
