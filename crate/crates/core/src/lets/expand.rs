//! The dot / path / lollipop expansions on normal graphs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::graph::NormalGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExpansionKind {
    Dot,
    Pa,
    Lo,
}

/// One expansion step: `dot_m`, `pa_m` or `lo_m^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expansion {
    pub kind: ExpansionKind,
    pub m: usize,
    /// Cycle length of a lollipop; zero otherwise.
    pub c: usize,
}

impl Expansion {
    pub fn dot(m: usize) -> Self {
        Expansion {
            kind: ExpansionKind::Dot,
            m,
            c: 0,
        }
    }

    pub fn pa(m: usize) -> Self {
        Expansion {
            kind: ExpansionKind::Pa,
            m,
            c: 0,
        }
    }

    pub fn lo(m: usize, c: usize) -> Self {
        Expansion {
            kind: ExpansionKind::Lo,
            m,
            c,
        }
    }

    /// Nodes added by the expansion.
    pub fn added_nodes(&self) -> usize {
        match self.kind {
            ExpansionKind::Dot => 1,
            ExpansionKind::Pa | ExpansionKind::Lo => self.m,
        }
    }

    /// Class of the child of a parent in class `(a, b)`, or `None` when the
    /// unsatisfied-check count would go negative.
    pub fn child_class(&self, a: usize, b: usize, dv: usize) -> Option<(usize, usize)> {
        let b2 = match self.kind {
            ExpansionKind::Dot => (b + dv).checked_sub(2 * self.m)?,
            ExpansionKind::Pa | ExpansionKind::Lo => (b + self.m * (dv - 2)).checked_sub(2)?,
        };
        Some((a + self.added_nodes(), b2))
    }

    /// Validity of the parameters for variable degree `dv` and normal-graph
    /// girth bound `min_cycle`.
    pub fn is_valid(&self, dv: usize, min_cycle: usize) -> bool {
        match self.kind {
            ExpansionKind::Dot => self.m >= 2 && self.m <= dv,
            ExpansionKind::Pa => self.m >= 2,
            ExpansionKind::Lo => self.c >= min_cycle.max(3) && self.c <= self.m && dv >= 3,
        }
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ExpansionKind::Dot => write!(f, "dot_{}", self.m),
            ExpansionKind::Pa => write!(f, "pa_{}", self.m),
            ExpansionKind::Lo => write!(f, "lo_{}^{}", self.m, self.c),
        }
    }
}

impl FromStr for Expansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad expansion `{s}`"));
        let (kind, rest) = s.split_once('_').ok_or_else(bad)?;
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match kind {
            "dot" => Ok(Expansion::dot(num(rest)?)),
            "pa" => Ok(Expansion::pa(num(rest)?)),
            "lo" => {
                let (m, c) = rest.split_once('^').ok_or_else(bad)?;
                Ok(Expansion::lo(num(m)?, num(c)?))
            }
            _ => Err(bad()),
        }
    }
}

/// All expansions that fit within `max_added` new nodes.
pub fn expansions_up_to(dv: usize, min_cycle: usize, max_added: usize) -> Vec<Expansion> {
    let mut out = Vec::new();
    if max_added == 0 {
        return out;
    }
    for m in 2..=dv {
        out.push(Expansion::dot(m));
    }
    for m in 2..=max_added {
        out.push(Expansion::pa(m));
    }
    for m in 3..=max_added {
        for c in min_cycle.max(3)..=m {
            out.push(Expansion::lo(m, c));
        }
    }
    out
}

/// Children of `g` under `e` (not deduplicated), respecting the degree cap
/// `dv` and keeping every cycle of length at least `min_cycle`.
pub fn apply(g: &NormalGraph, e: Expansion, dv: usize, min_cycle: usize) -> Vec<NormalGraph> {
    match e.kind {
        ExpansionKind::Dot => apply_dot(g, e.m, dv, min_cycle),
        ExpansionKind::Pa => apply_pa(g, e.m, dv, min_cycle),
        ExpansionKind::Lo => apply_lo(g, e.m, e.c, dv, min_cycle),
    }
}

fn deficient(g: &NormalGraph, dv: usize) -> Vec<usize> {
    (0..g.node_count()).filter(|&v| g.degree(v) < dv).collect()
}

fn distance_table(g: &NormalGraph) -> Vec<Vec<usize>> {
    (0..g.node_count()).map(|v| g.distances(v)).collect()
}

/// New node joined to `m` distinct deficient nodes.
pub fn apply_dot(g: &NormalGraph, m: usize, dv: usize, min_cycle: usize) -> Vec<NormalGraph> {
    let def = deficient(g, dv);
    let dist = distance_table(g);
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(m);
    subsets(&def, m, 0, &mut chosen, &mut |set| {
        // A new cycle through the added node has length dist(u, v) + 2.
        let ok = set.iter().enumerate().all(|(i, &u)| {
            set[i + 1..]
                .iter()
                .all(|&v| dist[u][v] == usize::MAX || dist[u][v] + 2 >= min_cycle)
        });
        if ok {
            let mut child = g.clone();
            let x = child.add_node();
            for &u in set {
                child.add_edge(x, u);
            }
            out.push(child);
        }
    });
    out
}

/// Path of `m` new nodes between two deficient nodes. Both ends may be the
/// same node when it has room for two more edges; the path then closes an
/// `(m + 1)`-cycle through it.
pub fn apply_pa(g: &NormalGraph, m: usize, dv: usize, min_cycle: usize) -> Vec<NormalGraph> {
    let def = deficient(g, dv);
    let dist = distance_table(g);
    let mut out = Vec::new();
    for (i, &x) in def.iter().enumerate() {
        for &y in &def[i..] {
            if x == y && (g.degree(x) + 2 > dv || m + 1 < min_cycle.max(3)) {
                continue;
            }
            if x != y && dist[x][y] != usize::MAX && dist[x][y] + m + 1 < min_cycle {
                continue;
            }
            let mut child = g.clone();
            let mut prev = x;
            for _ in 0..m {
                let u = child.add_node();
                child.add_edge(prev, u);
                prev = u;
            }
            child.add_edge(prev, y);
            out.push(child);
        }
    }
    out
}

/// Tail of `m - c` new nodes from a deficient anchor ending in a new
/// `c`-cycle.
pub fn apply_lo(g: &NormalGraph, m: usize, c: usize, dv: usize, min_cycle: usize) -> Vec<NormalGraph> {
    if c < 3 || c < min_cycle || c > m || dv < 3 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for x in deficient(g, dv) {
        let mut child = g.clone();
        let mut prev = x;
        for _ in 0..m - c {
            let u = child.add_node();
            child.add_edge(prev, u);
            prev = u;
        }
        let first = child.add_node();
        child.add_edge(prev, first);
        let mut last = first;
        for _ in 1..c {
            let u = child.add_node();
            child.add_edge(last, u);
            last = u;
        }
        child.add_edge(last, first);
        out.push(child);
    }
    out
}

fn subsets(items: &[usize], k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    let need = k - chosen.len();
    for i in start..items.len() {
        if items.len() - i < need {
            break;
        }
        chosen.push(items[i]);
        subsets(items, k, i + 1, chosen, f);
        chosen.pop();
    }
}
