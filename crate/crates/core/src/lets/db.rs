//! Databases of non-isomorphic LETS structures and their expansion edges.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::canon::{canonical_form, certificate_of_canonical, Certificate};
use super::coloring::chromatic_index;
use super::expand::{apply, expansions_up_to, Expansion};
use super::graph::NormalGraph;
use super::range::TargetRange;

const DB_MAGIC: &str = "qclets-structure-db v1";

/// A LETS structure: a canonical normal graph with its class data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetsStructure {
    /// Canonical form of the normal graph.
    pub graph: NormalGraph,
    pub dv: usize,
    pub a: usize,
    pub b: usize,
    /// Length of the shortest cycle of the normal graph; the simple cycle
    /// the structure's ancestry starts from.
    pub root_cycle_len: usize,
    pub cert: Certificate,
    pub chromatic_index: usize,
    /// `chromatic_index <= m` for the column weight `m` the flag was set for.
    pub qc_admissible: bool,
}

impl LetsStructure {
    /// Builds the structure of an arbitrary (not necessarily canonical) graph.
    pub fn from_graph(g: &NormalGraph, dv: usize) -> Result<Self> {
        let (a, b) = g.class(dv)?;
        let graph = canonical_form(g);
        let cert = certificate_of_canonical(&graph);
        let chi = chromatic_index(&graph);
        Ok(LetsStructure {
            root_cycle_len: graph.girth().unwrap_or(0),
            graph,
            dv,
            a,
            b,
            cert,
            chromatic_index: chi,
            qc_admissible: chi <= dv,
        })
    }

    pub fn class(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    pub fn is_cycle(&self) -> bool {
        self.graph.edge_count() == self.a && self.graph.min_degree() == 2 && self.graph.max_degree() == 2
    }
}

/// Parent/child relation labelled by the expansion that produces the child.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DbEdge {
    pub parent: usize,
    pub child: usize,
    pub expansion: Expansion,
}

/// Parameters of a structure enumeration.
#[derive(Debug, Clone)]
pub struct DbParams {
    pub dv: usize,
    /// Tanner-graph girth; normal graphs keep every cycle of length `>= girth / 2`.
    pub girth: usize,
    pub a_max: usize,
    pub b_max_search: usize,
    /// Optional region: structures that cannot grow into it are dropped.
    pub reach: Option<TargetRange>,
    /// Hard cap on the number of stored structures.
    pub max_structures: usize,
}

impl DbParams {
    /// Parameters covering `range`, with the default search bound
    /// `b_max + 2 dv` for out-of-range parents.
    pub fn for_range(dv: usize, girth: usize, range: &TargetRange) -> Self {
        DbParams {
            dv,
            girth,
            a_max: range.a_max(),
            b_max_search: range.b_max() + 2 * dv,
            reach: Some(range.clone()),
            max_structures: 5_000_000,
        }
    }

    fn min_cycle(&self) -> usize {
        (self.girth / 2).max(3)
    }

    fn keep(&self, a: usize, b: usize) -> bool {
        a <= self.a_max && b <= self.b_max_search && self.reach.as_ref().is_none_or(|r| r.may_reach(a, b, self.dv))
    }
}

/// All non-isomorphic structures reachable from simple cycles by
/// expansions, within the enumeration bounds.
#[derive(Debug, Clone)]
pub struct StructureDb {
    pub dv: usize,
    pub girth: usize,
    pub a_max: usize,
    pub b_max_search: usize,
    structures: Vec<LetsStructure>,
    index: HashMap<Certificate, usize>,
    edges: Vec<DbEdge>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

/// Builds the structure database. Shorthand for [`StructureDb::build`]
/// without a reachability region.
pub fn enumerate_structures(dv: usize, girth: usize, a_max: usize, b_max_search: usize) -> Result<StructureDb> {
    StructureDb::build(&DbParams {
        dv,
        girth,
        a_max,
        b_max_search,
        reach: None,
        max_structures: 5_000_000,
    })
}

impl StructureDb {
    pub fn build(p: &DbParams) -> Result<StructureDb> {
        if p.dv < 2 {
            return Err(Error::InvalidArgument("variable degree must be at least 2".into()));
        }
        let min_cycle = p.min_cycle();
        // level a -> certificate -> canonical graph
        let mut levels: BTreeMap<usize, BTreeMap<Certificate, NormalGraph>> = BTreeMap::new();
        for k in min_cycle..=p.a_max {
            let b = k * (p.dv - 2);
            if p.keep(k, b) {
                let g = canonical_form(&NormalGraph::cycle(k));
                levels.entry(k).or_default().insert(certificate_of_canonical(&g), g);
            }
        }
        let mut edge_certs: BTreeSet<(Certificate, Certificate, Expansion)> = BTreeSet::new();
        let mut total = 0usize;
        for a in min_cycle..=p.a_max {
            let level: Vec<(Certificate, NormalGraph)> = levels
                .get(&a)
                .map(|l| l.iter().map(|(c, g)| (c.clone(), g.clone())).collect())
                .unwrap_or_default();
            total += level.len();
            if total > p.max_structures {
                return Err(Error::BudgetExceeded(format!(
                    "more than {} structures",
                    p.max_structures
                )));
            }
            let exps = expansions_up_to(p.dv, min_cycle, p.a_max - a);
            let produced: Vec<Vec<(Certificate, NormalGraph, Expansion)>> = level
                .par_iter()
                .map(|(_, g)| {
                    let (_, b) = g.class(p.dv).expect("stored graphs respect dv");
                    let mut out = Vec::new();
                    let mut seen = BTreeSet::new();
                    for &e in &exps {
                        let Some((a2, b2)) = e.child_class(a, b, p.dv) else {
                            continue;
                        };
                        if !p.keep(a2, b2) {
                            continue;
                        }
                        for child in apply(g, e, p.dv, min_cycle) {
                            let canon = canonical_form(&child);
                            let cert = certificate_of_canonical(&canon);
                            if seen.insert((cert.clone(), e)) {
                                out.push((cert, canon, e));
                            }
                        }
                    }
                    out
                })
                .collect();
            for ((pcert, _), kids) in level.iter().zip(produced) {
                for (cert, canon, e) in kids {
                    let a2 = canon.node_count();
                    levels.entry(a2).or_default().entry(cert.clone()).or_insert(canon);
                    edge_certs.insert((pcert.clone(), cert, e));
                }
            }
        }
        let graphs: Vec<NormalGraph> = levels.into_values().flat_map(|l| l.into_values()).collect();
        let structures: Vec<LetsStructure> = graphs
            .par_iter()
            .map(|g| {
                let s = LetsStructure::from_graph(g, p.dv).expect("stored graphs respect dv");
                debug_assert_eq!(&s.graph, g);
                s
            })
            .collect();
        let edges: Vec<(Certificate, Certificate, Expansion)> = edge_certs.into_iter().collect();
        Ok(StructureDb::assemble(
            p.dv,
            p.girth,
            p.a_max,
            p.b_max_search,
            structures,
            edges,
        ))
    }

    fn assemble(
        dv: usize,
        girth: usize,
        a_max: usize,
        b_max_search: usize,
        mut structures: Vec<LetsStructure>,
        edge_certs: Vec<(Certificate, Certificate, Expansion)>,
    ) -> StructureDb {
        structures.sort_by(|x, y| (x.a, x.b, &x.cert).cmp(&(y.a, y.b, &y.cert)));
        let index: HashMap<Certificate, usize> = structures
            .iter()
            .enumerate()
            .map(|(i, s)| (s.cert.clone(), i))
            .collect();
        let mut edges: Vec<DbEdge> = edge_certs
            .into_iter()
            .filter_map(|(pc, cc, e)| {
                Some(DbEdge {
                    parent: *index.get(&pc)?,
                    child: *index.get(&cc)?,
                    expansion: e,
                })
            })
            .collect();
        edges.sort();
        edges.dedup();
        let mut parents = vec![Vec::new(); structures.len()];
        let mut children = vec![Vec::new(); structures.len()];
        for (k, e) in edges.iter().enumerate() {
            parents[e.child].push(k);
            children[e.parent].push(k);
        }
        StructureDb {
            dv,
            girth,
            a_max,
            b_max_search,
            structures,
            index,
            edges,
            parents,
            children,
        }
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    pub fn structures(&self) -> &[LetsStructure] {
        &self.structures
    }

    pub fn get(&self, id: usize) -> &LetsStructure {
        &self.structures[id]
    }

    pub fn id_of(&self, cert: &Certificate) -> Option<usize> {
        self.index.get(cert).copied()
    }

    pub fn edges(&self) -> &[DbEdge] {
        &self.edges
    }

    /// Incoming edges of a structure.
    pub fn parent_edges(&self, id: usize) -> impl Iterator<Item = &DbEdge> + '_ {
        self.parents[id].iter().map(move |&k| &self.edges[k])
    }

    /// Outgoing edges of a structure.
    pub fn child_edges(&self, id: usize) -> impl Iterator<Item = &DbEdge> + '_ {
        self.children[id].iter().map(move |&k| &self.edges[k])
    }

    /// Structure ids of one class, in numbering order.
    pub fn class_members(&self, a: usize, b: usize) -> Vec<usize> {
        let lo = self.structures.partition_point(|s| (s.a, s.b) < (a, b));
        let hi = self.structures.partition_point(|s| (s.a, s.b) <= (a, b));
        (lo..hi).collect()
    }

    /// Distinct classes present, sorted.
    pub fn classes(&self) -> Vec<(usize, usize)> {
        let mut c: Vec<(usize, usize)> = self.structures.iter().map(LetsStructure::class).collect();
        c.dedup();
        c
    }

    /// Copy with the admissibility flag recomputed for `m` colours.
    pub fn qc_filter(&self, m: usize) -> StructureDb {
        let mut db = self.clone();
        for s in &mut db.structures {
            s.qc_admissible = s.chromatic_index <= m;
        }
        db
    }

    /// Sub-database of the admissible structures and the edges among them.
    pub fn admissible_only(&self) -> StructureDb {
        let structures: Vec<LetsStructure> = self.structures.iter().filter(|s| s.qc_admissible).cloned().collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| self.structures[e.parent].qc_admissible && self.structures[e.child].qc_admissible)
            .map(|e| {
                (
                    self.structures[e.parent].cert.clone(),
                    self.structures[e.child].cert.clone(),
                    e.expansion,
                )
            })
            .collect();
        StructureDb::assemble(self.dv, self.girth, self.a_max, self.b_max_search, structures, edges)
    }

    /// Per-class and per-root counts: `(a, b) -> root_k -> (admissible, all)`.
    pub fn class_summary(&self) -> BTreeMap<(usize, usize), BTreeMap<usize, (usize, usize)>> {
        let mut out: BTreeMap<(usize, usize), BTreeMap<usize, (usize, usize)>> = BTreeMap::new();
        for s in &self.structures {
            let e = out.entry(s.class()).or_default().entry(s.root_cycle_len).or_default();
            e.1 += 1;
            if s.qc_admissible {
                e.0 += 1;
            }
        }
        out
    }

    /// Rendering of the classes in `range` with at least one inadmissible
    /// structure, in `s_k(admissible)/s_k(all)` notation.
    pub fn render_table1(&self, range: &TargetRange) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# dv={} g={} {}", self.dv, self.girth, range);
        for ((a, b), roots) in self.class_summary() {
            if !range.contains(a, b) || roots.values().all(|(q, t)| q == t) {
                continue;
            }
            let cells: Vec<String> = roots
                .iter()
                .map(|(k, (q, t))| format!("s_{k}({q})/s_{k}({t})"))
                .collect();
            let _ = writeln!(out, "({a},{b}) {}", cells.join(" "));
        }
        out
    }

    /// Versioned text serialization.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{DB_MAGIC}");
        let _ = writeln!(
            out,
            "dv {} girth {} a_max {} b_max_search {}",
            self.dv, self.girth, self.a_max, self.b_max_search
        );
        for s in &self.structures {
            let _ = writeln!(
                out,
                "S {} {} {} {} {} {} {}",
                s.a,
                s.b,
                s.dv,
                s.cert,
                s.graph.edge_string(),
                s.root_cycle_len,
                u8::from(s.qc_admissible)
            );
        }
        for e in &self.edges {
            let (kind, m, c) = match e.expansion.kind {
                super::expand::ExpansionKind::Dot => ("dot", e.expansion.m, 0),
                super::expand::ExpansionKind::Pa => ("pa", e.expansion.m, 0),
                super::expand::ExpansionKind::Lo => ("lo", e.expansion.m, e.expansion.c),
            };
            let _ = writeln!(
                out,
                "E {} {} {kind} {m} {c}",
                self.structures[e.parent].cert, self.structures[e.child].cert
            );
        }
        out
    }

    pub fn from_text(text: &str) -> Result<StructureDb> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, magic) = lines.next().ok_or_else(|| Error::parse(1, "empty database"))?;
        if magic != DB_MAGIC {
            return Err(Error::Version(magic.to_string()));
        }
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(2, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 8 || h[0] != "dv" || h[2] != "girth" || h[4] != "a_max" || h[6] != "b_max_search" {
            return Err(Error::parse(hl, "bad header"));
        }
        let num = |ln: usize, t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(ln, format!("bad number `{t}`")))
        };
        let dv = num(hl, h[1])?;
        let girth = num(hl, h[3])?;
        let a_max = num(hl, h[5])?;
        let b_max_search = num(hl, h[7])?;
        let mut structures = Vec::new();
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            match t.first().copied() {
                Some("S") if t.len() == 8 || t.len() == 7 => {
                    // an edgeless graph has an empty edge list token
                    let (edges_tok, root_tok, qc_tok) = if t.len() == 8 {
                        (t[5], t[6], t[7])
                    } else {
                        ("", t[5], t[6])
                    };
                    let a = num(ln, t[1])?;
                    let cert = Certificate::parse(t[4]).ok_or_else(|| Error::parse(ln, "bad certificate"))?;
                    let graph = NormalGraph::parse_edges(a, edges_tok).map_err(|e| Error::parse(ln, e.to_string()))?;
                    let mut s = LetsStructure::from_graph(&graph, num(ln, t[3])?)
                        .map_err(|e| Error::parse(ln, e.to_string()))?;
                    if s.cert != cert || s.b != num(ln, t[2])? || s.root_cycle_len != num(ln, root_tok)? {
                        return Err(Error::parse(ln, "structure fields are inconsistent"));
                    }
                    s.qc_admissible = num(ln, qc_tok)? == 1;
                    structures.push(s);
                }
                Some("E") if t.len() == 6 => {
                    let pc = Certificate::parse(t[1]).ok_or_else(|| Error::parse(ln, "bad certificate"))?;
                    let cc = Certificate::parse(t[2]).ok_or_else(|| Error::parse(ln, "bad certificate"))?;
                    let (m, c) = (num(ln, t[4])?, num(ln, t[5])?);
                    let e = match t[3] {
                        "dot" => Expansion::dot(m),
                        "pa" => Expansion::pa(m),
                        "lo" => Expansion::lo(m, c),
                        other => return Err(Error::parse(ln, format!("bad expansion kind `{other}`"))),
                    };
                    edges.push((pc, cc, e));
                }
                _ => return Err(Error::parse(ln, "unrecognised record")),
            }
        }
        let n_edges = edges.len();
        let db = StructureDb::assemble(dv, girth, a_max, b_max_search, structures, edges);
        if db.edges.len() != n_edges {
            return Err(Error::parse(0, "edge refers to an unknown structure"));
        }
        Ok(db)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_db_round_trips_through_text() {
        let db = enumerate_structures(3, 8, 7, 5).unwrap();
        let back = StructureDb::from_text(&db.to_text()).unwrap();
        assert_eq!(back.len(), db.len());
        assert_eq!(back.edges(), db.edges());
        assert_eq!(back.structures(), db.structures());
    }

    #[test]
    fn kite_is_the_only_5_3_structure() {
        let db = enumerate_structures(3, 8, 5, 5).unwrap();
        assert_eq!(db.class_members(5, 3).len(), 1);
        assert_eq!(db.class_members(4, 4).len(), 1);
    }
}
