//! Layered search plans: a forest rooted at simple cycles in which every
//! retained structure is produced from exactly one plan parent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lets::{Certificate, Expansion, ExpansionKind, StructureDb, TargetRange};

use super::target::{greedy_cover, in_range, ParentCover, TargetSet};

const PLAN_MAGIC: &str = "qclets-search-plan v1";

/// How the plan's targets are to be used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanKind {
    /// Membership test: stop at the first instance of any target.
    Targeted,
    /// Count every instance of every in-range structure.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanNode {
    pub cert: Certificate,
    pub a: usize,
    pub b: usize,
    pub root_cycle_len: usize,
    pub is_cycle: bool,
    pub is_target: bool,
    /// Plan parent and the expansion producing this node from it.
    pub parent: Option<(usize, Expansion)>,
}

/// A search plan over structures identified by certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchPlan {
    pub kind: PlanKind,
    pub dv: usize,
    pub girth: usize,
    pub range: TargetRange,
    pub nodes: Vec<PlanNode>,
    children: Vec<Vec<usize>>,
}

impl SearchPlan {
    fn new(kind: PlanKind, dv: usize, girth: usize, range: TargetRange, nodes: Vec<PlanNode>) -> Self {
        let mut children = vec![Vec::new(); nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            if let Some((p, _)) = n.parent {
                children[p].push(i);
            }
        }
        SearchPlan {
            kind,
            dv,
            girth,
            range,
            nodes,
            children,
        }
    }

    /// A plan with nothing to search for.
    pub fn empty(dv: usize, girth: usize) -> Self {
        SearchPlan::new(PlanKind::Targeted, dv, girth, TargetRange::default(), Vec::new())
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// Root nodes (simple cycles), in processing order.
    pub fn roots(&self) -> Vec<usize> {
        let mut r: Vec<usize> = (0..self.nodes.len())
            .filter(|&i| self.nodes[i].parent.is_none())
            .collect();
        r.sort_by_key(|&i| (self.nodes[i].a, i));
        r
    }

    pub fn root_lengths(&self) -> BTreeSet<usize> {
        self.roots().into_iter().map(|i| self.nodes[i].a).collect()
    }

    pub fn targets(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_target).collect()
    }

    /// Sizes of the targets, ascending: the layers of the search.
    pub fn layers(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.nodes.iter().filter(|n| n.is_target).map(|n| n.a).collect();
        s.into_iter().collect()
    }

    /// Nodes kept only as intermediates (neither target nor root).
    pub fn retained(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| !self.nodes[i].is_target && self.nodes[i].parent.is_some())
            .collect()
    }

    /// Expansions listed for a node: those producing at least one child.
    pub fn expansions_of(&self, node: usize) -> BTreeSet<Expansion> {
        self.children[node]
            .iter()
            .filter_map(|&c| self.nodes[c].parent.map(|(_, e)| e))
            .collect()
    }

    /// Per-class characterization table: structure counts per root and
    /// the union of expansions applied to the class.
    pub fn char_table(&self) -> CharTable {
        let mut t = CharTable::default();
        for (i, n) in self.nodes.iter().enumerate() {
            let entry = t.classes.entry((n.a, n.b)).or_default();
            *entry.roots.entry(n.root_cycle_len).or_insert(0) += 1;
            entry.expansions.extend(self.expansions_of(i));
        }
        t
    }

    /// Versioned text serialization.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{PLAN_MAGIC}");
        let kind = match self.kind {
            PlanKind::Targeted => "targeted",
            PlanKind::Exhaustive => "exhaustive",
        };
        let range = if self.range.is_empty() {
            "-".to_string()
        } else {
            self.range.to_string()
        };
        let _ = writeln!(out, "kind {kind} dv {} girth {} range {range}", self.dv, self.girth);
        let layers: Vec<String> = self.layers().iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "layers {}",
            if layers.is_empty() {
                "-".into()
            } else {
                layers.join(",")
            }
        );
        let roots: Vec<String> = self.root_lengths().iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "roots {}",
            if roots.is_empty() { "-".into() } else { roots.join(",") }
        );
        for (i, n) in self.nodes.iter().enumerate() {
            let role = match (n.is_target, n.parent.is_none()) {
                (true, true) => "TC",
                (true, false) => "T",
                (false, true) => "C",
                (false, false) => "R",
            };
            let (p, e) = match n.parent {
                Some((p, e)) => (p.to_string(), e.to_string()),
                None => ("-".into(), "-".into()),
            };
            let _ = writeln!(
                out,
                "N {i} {} {} {} {role} {p} {e} {}",
                n.a, n.b, n.root_cycle_len, n.cert
            );
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SearchPlan> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, magic) = lines.next().ok_or_else(|| Error::parse(1, "empty plan"))?;
        if magic != PLAN_MAGIC {
            return Err(Error::Version(magic.to_string()));
        }
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(2, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 8 || h[0] != "kind" || h[2] != "dv" || h[4] != "girth" || h[6] != "range" {
            return Err(Error::parse(hl, "bad header"));
        }
        let num = |ln: usize, t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(ln, format!("bad number `{t}`")))
        };
        let kind = match h[1] {
            "targeted" => PlanKind::Targeted,
            "exhaustive" => PlanKind::Exhaustive,
            other => return Err(Error::parse(hl, format!("bad plan kind `{other}`"))),
        };
        let dv = num(hl, h[3])?;
        let girth = num(hl, h[5])?;
        let range = if h[7] == "-" {
            TargetRange::default()
        } else {
            h[7].parse().map_err(|e: Error| Error::parse(hl, e.to_string()))?
        };
        let mut nodes = Vec::new();
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            match t.first().copied() {
                Some("layers") | Some("roots") => continue,
                Some("N") if t.len() == 10 => {
                    if num(ln, t[1])? != nodes.len() {
                        return Err(Error::parse(ln, "node ids must be consecutive"));
                    }
                    let parent = if t[6] == "-" {
                        None
                    } else {
                        let p = num(ln, t[6])?;
                        if p >= nodes.len() {
                            return Err(Error::parse(ln, "parent must precede child"));
                        }
                        let e: Expansion = t[7].parse().map_err(|e: Error| Error::parse(ln, e.to_string()))?;
                        Some((p, e))
                    };
                    let cert = Certificate::parse(t[9]).ok_or_else(|| Error::parse(ln, "bad certificate"))?;
                    nodes.push(PlanNode {
                        cert,
                        a: num(ln, t[2])?,
                        b: num(ln, t[3])?,
                        root_cycle_len: num(ln, t[4])?,
                        is_cycle: parent.is_none(),
                        is_target: t[5].starts_with('T'),
                        parent,
                    });
                }
                _ => return Err(Error::parse(ln, "unrecognised record")),
            }
        }
        Ok(SearchPlan::new(kind, dv, girth, range, nodes))
    }
}

/// Characterization table: per class, structure counts by root cycle
/// length and the expansions applied to the class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CharTable {
    pub classes: BTreeMap<(usize, usize), ClassEntry>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassEntry {
    pub roots: BTreeMap<usize, usize>,
    pub expansions: BTreeSet<Expansion>,
}

impl ClassEntry {
    pub fn count(&self) -> usize {
        self.roots.values().sum()
    }
}

impl CharTable {
    /// Weighted expansion counts: every structure of a class is charged
    /// once for each expansion listed for the class.
    pub fn cost_report(&self) -> BTreeMap<Expansion, usize> {
        let mut out = BTreeMap::new();
        for entry in self.classes.values() {
            for &e in &entry.expansions {
                *out.entry(e).or_insert(0) += entry.count();
            }
        }
        out
    }

    /// Grid with one row per `b` and one column per `a`.
    pub fn render_grid(&self) -> String {
        let a_vals: BTreeSet<usize> = self.classes.keys().map(|k| k.0).collect();
        let b_vals: BTreeSet<usize> = self.classes.keys().map(|k| k.1).collect();
        let cell = |a: usize, b: usize| -> String {
            match self.classes.get(&(a, b)) {
                None => String::new(),
                Some(e) => {
                    let roots: Vec<String> = e.roots.iter().map(|(k, n)| format!("s_{k}({n})")).collect();
                    let exps: Vec<String> = e.expansions.iter().map(Expansion::to_string).collect();
                    if exps.is_empty() {
                        roots.join(" ")
                    } else {
                        format!("{} [{}]", roots.join(" "), exps.join(","))
                    }
                }
            }
        };
        let mut width = 6;
        for &(a, b) in self.classes.keys() {
            width = width.max(cell(a, b).len());
        }
        let mut out = String::new();
        let _ = write!(out, "{:>4} |", "b\\a");
        for a in &a_vals {
            let _ = write!(out, " {:<width$} |", a);
        }
        out.push('\n');
        for b in b_vals.iter().rev() {
            let _ = write!(out, "{b:>4} |");
            for &a in &a_vals {
                let _ = write!(out, " {:<width$} |", cell(a, *b));
            }
            out.push('\n');
        }
        out
    }
}

fn node_from_db(db: &StructureDb, id: usize, is_target: bool) -> PlanNode {
    let s = db.get(id);
    PlanNode {
        cert: s.cert.clone(),
        a: s.a,
        b: s.b,
        root_cycle_len: s.root_cycle_len,
        is_cycle: s.is_cycle(),
        is_target,
        parent: None,
    }
}

/// Assembles the plan forest from a parent assignment over database ids.
fn assemble(
    db: &StructureDb,
    kind: PlanKind,
    range: &TargetRange,
    members: &BTreeSet<usize>,
    targets: &BTreeSet<usize>,
    parent_of: &BTreeMap<usize, (usize, Expansion)>,
) -> Result<SearchPlan> {
    // parents always have fewer nodes, so database order is topological
    let order: Vec<usize> = members.iter().copied().collect();
    let index: BTreeMap<usize, usize> = order.iter().enumerate().map(|(k, &id)| (id, k)).collect();
    let mut nodes = Vec::with_capacity(order.len());
    for &id in &order {
        let mut node = node_from_db(db, id, targets.contains(&id));
        if !node.is_cycle {
            let (p, e) = parent_of
                .get(&id)
                .ok_or_else(|| Error::DbInsufficient(format!("no plan parent for {}", db.get(id).cert)))?;
            node.parent = Some((index[p], *e));
        }
        nodes.push(node);
    }
    Ok(SearchPlan::new(kind, db.dv, db.girth, range.clone(), nodes))
}

/// Membership-test plan from a target set and its parent cover: each
/// covered structure is attached to the parent that covered it.
pub fn build_plan(db: &StructureDb, range: &TargetRange, lt: &TargetSet, cover: &ParentCover) -> Result<SearchPlan> {
    let targets: BTreeSet<usize> = lt.members.iter().copied().collect();
    let mut members = targets.clone();
    let mut parent_of: BTreeMap<usize, (usize, Expansion)> = BTreeMap::new();
    for step in &cover.steps {
        for choice in &step.chosen {
            members.insert(choice.parent);
            for &(child, e) in &choice.covers {
                parent_of.entry(child).or_insert((choice.parent, e));
            }
        }
    }
    assemble(db, PlanKind::Targeted, range, &members, &targets, &parent_of)
}

/// Rank of an expansion by instance-level search cost.
fn expansion_cost(e: &Expansion) -> (usize, usize, usize) {
    let k = match e.kind {
        ExpansionKind::Dot => 0,
        ExpansionKind::Pa => 1,
        ExpansionKind::Lo => 2,
    };
    (k, e.m, e.c)
}

/// Plan that reaches every in-range structure. Structures are given a
/// parent that is itself needed whenever one exists (cheapest expansion
/// first); the rest are covered greedily by out-of-range parents with the
/// same class priority as the targeted cover.
pub fn build_exhaustive_plan(db: &StructureDb, range: &TargetRange) -> Result<SearchPlan> {
    if range.a_max() > db.a_max || range.b_max() > db.b_max_search {
        return Err(Error::DbInsufficient(format!(
            "range {range} exceeds the database bounds"
        )));
    }
    let targets: BTreeSet<usize> = in_range(db, range).into_iter().collect();
    let mut needed = targets.clone();
    let mut parent_of: BTreeMap<usize, (usize, Expansion)> = BTreeMap::new();
    let a_hi = range.a_max();
    for a in (1..=a_hi).rev() {
        let level: Vec<usize> = needed
            .iter()
            .copied()
            .filter(|&x| db.get(x).a == a && !db.get(x).is_cycle())
            .collect();
        let mut open = BTreeSet::new();
        for x in level {
            let best = db
                .parent_edges(x)
                .filter(|e| needed.contains(&e.parent))
                .min_by_key(|e| (expansion_cost(&e.expansion), db.get(e.parent).class(), e.parent));
            match best {
                Some(e) => {
                    parent_of.insert(x, (e.parent, e.expansion));
                }
                None => {
                    open.insert(x);
                }
            }
        }
        if open.is_empty() {
            continue;
        }
        let step = greedy_cover(db, &open, &BTreeSet::new())?;
        for choice in step.chosen {
            needed.insert(choice.parent);
            for (child, e) in choice.covers {
                parent_of.entry(child).or_insert((choice.parent, e));
            }
        }
    }
    assemble(db, PlanKind::Exhaustive, range, &needed, &targets, &parent_of)
}

/// Characterization table of the exhaustive search restricted to the
/// structures of `plan`: every class lists each expansion that takes some
/// member to another member of the plan.
pub fn exhaustive_char_table(db: &StructureDb, plan: &SearchPlan) -> CharTable {
    let ids: BTreeSet<usize> = plan.nodes.iter().filter_map(|n| db.id_of(&n.cert)).collect();
    let mut t = CharTable::default();
    for &id in &ids {
        let s = db.get(id);
        let entry = t.classes.entry(s.class()).or_default();
        *entry.roots.entry(s.root_cycle_len).or_insert(0) += 1;
        for e in db.child_edges(id) {
            if ids.contains(&e.child) {
                entry.expansions.insert(e.expansion);
            }
        }
    }
    t
}
