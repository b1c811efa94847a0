//! Expansions applied to concrete instances.
//!
//! Generators return candidate variable sets (parent plus new variables,
//! sorted). Every placement realizing the expansion as an induced
//! elementary subgraph is produced; a few extra candidates may slip
//! through (e.g. a path whose nodes are joined by a chord), so callers
//! match the induced normal graph before accepting a candidate.

use crate::lets::{Expansion, ExpansionKind};
use crate::qc::TannerGraph;

use super::instance::induce;

/// Checks touched by an instance.
pub(crate) struct Context<'a> {
    t: &'a TannerGraph,
    vars: &'a [u32],
    /// `(check, multiplicity, owner)` sorted by check; the owner is the
    /// variable of a degree-1 check.
    checks: Vec<(u32, u8, u32)>,
}

impl<'a> Context<'a> {
    pub fn new(t: &'a TannerGraph, vars: &'a [u32]) -> Self {
        let mut raw: Vec<(u32, u32)> = vars
            .iter()
            .flat_map(|&v| t.var_checks(v).iter().map(move |&c| (c, v)))
            .collect();
        raw.sort_unstable();
        let mut checks: Vec<(u32, u8, u32)> = Vec::with_capacity(raw.len());
        for (c, v) in raw {
            match checks.last_mut() {
                Some(last) if last.0 == c => last.1 += 1,
                _ => checks.push((c, 1, v)),
            }
        }
        Context { t, vars, checks }
    }

    fn lookup(&self, c: u32) -> Option<(u8, u32)> {
        self.checks
            .binary_search_by_key(&c, |x| x.0)
            .ok()
            .map(|i| (self.checks[i].1, self.checks[i].2))
    }

    fn contains(&self, v: u32) -> bool {
        self.vars.binary_search(&v).is_ok()
    }

    /// Degree-1 checks this variable shares with the instance, or `None`
    /// if it touches a degree-2 check (the result would not be elementary).
    fn contacts(&self, w: u32, out: &mut Vec<(u32, u32)>) -> bool {
        out.clear();
        for &c in self.t.var_checks(w) {
            match self.lookup(c) {
                None => {}
                Some((1, owner)) => out.push((c, owner)),
                Some(_) => return false,
            }
        }
        true
    }

    fn unsatisfied(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.checks.iter().filter(|x| x.1 == 1).map(|x| (x.0, x.2))
    }

    fn with(&self, extra: &[u32]) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.vars.len() + extra.len());
        v.extend_from_slice(self.vars);
        v.extend_from_slice(extra);
        v.sort_unstable();
        v
    }

    /// Outside variables reachable through degree-1 checks, once each.
    fn frontier(&self) -> Vec<u32> {
        let mut ws: Vec<u32> = self
            .unsatisfied()
            .flat_map(|(c, _)| self.t.check_vars(c).iter().copied())
            .filter(|&w| !self.contains(w))
            .collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }
}

/// Candidates for `e` applied to the instance `vars` (sorted).
pub(crate) fn candidates(t: &TannerGraph, vars: &[u32], e: Expansion, out: &mut Vec<Vec<u32>>) {
    let ctx = Context::new(t, vars);
    match e.kind {
        ExpansionKind::Dot => dot(&ctx, e.m, out),
        ExpansionKind::Pa => walks(&ctx, e.m, None, out),
        ExpansionKind::Lo => walks(&ctx, e.m, Some(e.c), out),
    }
}

fn dot(ctx: &Context, m: usize, out: &mut Vec<Vec<u32>>) {
    let mut contacts = Vec::new();
    for w in ctx.frontier() {
        if ctx.contacts(w, &mut contacts) && contacts.len() == m {
            out.push(ctx.with(&[w]));
        }
    }
}

/// Paths of `m` new variables leaving the instance through a degree-1
/// check. Without `cycle` the last one must re-enter through another
/// degree-1 check, possibly of the same variable (`pa_m`); with
/// `cycle = Some(c)` the last one closes a `c`-cycle with the new variable
/// `m - c + 1` (`lo_m^c`).
fn walks(ctx: &Context, m: usize, cycle: Option<usize>, out: &mut Vec<Vec<u32>>) {
    if m == 0 || cycle.is_some_and(|c| c < 3 || c > m) {
        return;
    }
    let mut contacts = Vec::new();
    let mut path = Vec::with_capacity(m);
    for (c, _) in ctx.unsatisfied() {
        for &w in ctx.t.check_vars(c) {
            if ctx.contains(w) || !ctx.contacts(w, &mut contacts) || contacts.len() != 1 {
                continue;
            }
            path.clear();
            path.push(w);
            let mut used = vec![c];
            grow(ctx, m, cycle, &mut path, &mut used, &mut contacts, out);
        }
    }
}

fn grow(
    ctx: &Context,
    m: usize,
    cycle: Option<usize>,
    path: &mut Vec<u32>,
    used: &mut Vec<u32>,
    contacts: &mut Vec<(u32, u32)>,
    out: &mut Vec<Vec<u32>>,
) {
    let t = ctx.t;
    let last = *path.last().unwrap();
    if path.len() == m {
        match cycle {
            None => {}
            Some(c) => {
                let first = path[m - c];
                let closes = t
                    .var_checks(last)
                    .iter()
                    .any(|x| !used.contains(x) && t.var_checks(first).binary_search(x).is_ok());
                if closes {
                    out.push(ctx.with(path));
                }
            }
        }
        return;
    }
    let next_is_last = path.len() + 1 == m;
    for &d in t.var_checks(last) {
        if used.contains(&d) || ctx.lookup(d).is_some() {
            continue;
        }
        for &y in t.check_vars(d) {
            if y == last || ctx.contains(y) || path.contains(&y) {
                continue;
            }
            if !ctx.contacts(y, contacts) {
                continue;
            }
            let ok = match (cycle, next_is_last) {
                (None, true) => contacts.len() == 1 && contacts[0].0 != used[0],
                _ => contacts.is_empty(),
            };
            if !ok {
                continue;
            }
            if next_is_last && cycle.is_none() {
                path.push(y);
                out.push(ctx.with(path));
                path.pop();
                continue;
            }
            path.push(y);
            used.push(d);
            grow(ctx, m, cycle, path, used, contacts, out);
            used.pop();
            path.pop();
        }
    }
}

/// Expansion children of an instance that are elementary and whose normal
/// graph is the parent's plus the expansion's new nodes (checked through
/// class arithmetic and minimum degree).
pub fn expand_instance(t: &TannerGraph, vars: &[u32], e: Expansion, dv: usize) -> Vec<Vec<u32>> {
    let mut vars = vars.to_vec();
    vars.sort_unstable();
    let Some(parent) = induce(t, &vars) else {
        return Vec::new();
    };
    let a = vars.len();
    let b = a * dv - 2 * parent.graph.edge_count();
    let Some(want) = e.child_class(a, b, dv) else {
        return Vec::new();
    };
    let mut raw = Vec::new();
    candidates(t, &vars, e, &mut raw);
    raw.sort_unstable();
    raw.dedup();
    raw.retain(|c| {
        induce(t, c).is_some_and(|ind| {
            let n = c.len();
            ind.graph.min_degree() >= 2 && (n, n * dv - 2 * ind.graph.edge_count()) == want
        })
    });
    raw
}
