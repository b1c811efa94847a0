//! Plan-driven instance search: early-exit membership tests and exhaustive
//! counting.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lets::{canonical_form, Certificate, Expansion, StructureDb, TargetRange};
use crate::plan::{build_exhaustive_plan, SearchPlan};
use crate::qc::{bfs_girth, TannerGraph};

use super::cycles::{enumerate_cycles, Seeds};
use super::expand::candidates;
use super::instance::{induce, orbit_representative, orbit_size, KeyCodec, LetsInstance, SetKey};

/// Limits and options of one search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Cap on instances held at any time.
    pub max_instances: usize,
    pub deadline: Option<Instant>,
    /// Seed cycles only from copy-zero variables of a lifted graph. Only
    /// used by [`layered_find`]; counting on a quasi-cyclic graph always
    /// works on whole orbits.
    pub qc_seeds: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_instances: 50_000_000,
            deadline: None,
            qc_seeds: true,
        }
    }
}

impl SearchConfig {
    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// A found instance of a targeted structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Index of the plan node that matched.
    pub node: usize,
    pub class: (usize, usize),
    /// Smallest member of the instance's cyclic-shift orbit, among the
    /// instances of the first matching plan node.
    pub instance: LetsInstance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Clean,
    Found(Witness),
}

impl Verdict {
    pub fn is_clean(&self) -> bool {
        matches!(self, Verdict::Clean)
    }
}

/// Multiplicities of LETS instances per `(a, b)` class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub counts: BTreeMap<(usize, usize), u64>,
}

impl ClassCounts {
    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.counts.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Whether every listed class has multiplicity zero.
    pub fn is_clean(&self) -> bool {
        self.counts.values().all(|&c| c == 0)
    }

    /// `a,b,count` lines with a header, sorted by class.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("a,b,count\n");
        for (&(a, b), &c) in &self.counts {
            let _ = writeln!(s, "{a},{b},{c}");
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<ClassCounts> {
        let mut counts = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with('a')) {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let num = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| Error::parse(i + 1, format!("bad number `{s}`")))
            };
            if f.len() != 3 {
                return Err(Error::parse(i + 1, "expected a,b,count"));
            }
            counts.insert((num(f[0])? as usize, num(f[1])? as usize), num(f[2])?);
        }
        Ok(ClassCounts { counts })
    }
}

/// Per-node lookup data derived from a plan.
struct Prepared {
    /// Processing order: by size, then root length, then index.
    order: Vec<usize>,
    /// For each node: expansions of its children, in order.
    expansions: Vec<Vec<Expansion>>,
    /// For each node: canonical adjacency of each child -> child index.
    child_lookup: Vec<HashMap<Vec<u32>, usize>>,
}

fn chain_root(plan: &SearchPlan, mut i: usize) -> usize {
    while let Some((p, _)) = plan.nodes[i].parent {
        i = p;
    }
    plan.nodes[i].a
}

fn prepare(plan: &SearchPlan) -> Result<Prepared> {
    let n = plan.nodes.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (plan.nodes[i].a, chain_root(plan, i), i));
    let mut expansions = vec![Vec::new(); n];
    let mut child_lookup = vec![HashMap::new(); n];
    for i in 0..n {
        expansions[i] = plan.expansions_of(i).into_iter().collect();
        for &c in plan.children(i) {
            child_lookup[i].insert(canonical_masks(&plan.nodes[c].cert)?, c);
        }
    }
    Ok(Prepared {
        order,
        expansions,
        child_lookup,
    })
}

fn canonical_masks(cert: &Certificate) -> Result<Vec<u32>> {
    let g = cert
        .to_graph()
        .ok_or_else(|| Error::InvalidArgument(format!("malformed certificate {cert}")))?;
    Ok(canonical_form(&g).masks().to_vec())
}

fn check_compatible(t: &TannerGraph, plan: &SearchPlan) -> Result<()> {
    if t.num_vars() == 0 || plan.nodes.is_empty() {
        return Ok(());
    }
    match t.var_degree() {
        Some(d) if d == plan.dv => Ok(()),
        other => Err(Error::InvalidArgument(format!(
            "plan is for variable degree {}, graph has {:?}",
            plan.dv, other
        ))),
    }
}

/// What to do with the instances of a target node.
enum Mode {
    Find,
    Count,
}

enum Outcome {
    Found(usize, Vec<Vec<u32>>),
    Counted(Vec<u64>),
    Clean,
}

fn run(t: &TannerGraph, plan: &SearchPlan, cfg: &SearchConfig, mode: Mode) -> Result<Outcome> {
    check_compatible(t, plan)?;
    let prep = prepare(plan)?;
    let codec = KeyCodec::new(t.num_vars());
    let a_max = plan.nodes.iter().map(|n| n.a).max().unwrap_or(0);
    if codec.packs(a_max) {
        Search::<u128>::new(t, plan, &prep, codec, cfg).run(mode)
    } else {
        Search::<Box<[u32]>>::new(t, plan, &prep, codec, cfg).run(mode)
    }
}

/// Parent instances expanded per batch before their children are merged.
const CHUNK: usize = 1 << 16;

struct Search<'a, K> {
    t: &'a TannerGraph,
    plan: &'a SearchPlan,
    prep: &'a Prepared,
    codec: KeyCodec,
    cfg: &'a SearchConfig,
    cancelled: AtomicBool,
    /// Hold one representative per cyclic-shift orbit (counting on a
    /// quasi-cyclic graph).
    orbits: bool,
    /// Instances currently held.
    live: usize,
    _key: std::marker::PhantomData<K>,
}

impl<'a, K: SetKey> Search<'a, K> {
    fn new(
        t: &'a TannerGraph,
        plan: &'a SearchPlan,
        prep: &'a Prepared,
        codec: KeyCodec,
        cfg: &'a SearchConfig,
    ) -> Self {
        Search {
            t,
            plan,
            prep,
            codec,
            cfg,
            cancelled: AtomicBool::new(false),
            orbits: false,
            live: 0,
            _key: std::marker::PhantomData,
        }
    }

    fn run(mut self, mode: Mode) -> Result<Outcome> {
        match mode {
            Mode::Find => self.find(),
            Mode::Count => {
                self.orbits = self.t.is_quasi_cyclic();
                self.count().map(Outcome::Counted)
            }
        }
    }

    fn hold(&mut self, n: usize) -> Result<()> {
        self.live += n;
        if self.live > self.cfg.max_instances {
            return Err(Error::BudgetExceeded(format!(
                "more than {} instances held",
                self.cfg.max_instances
            )));
        }
        Ok(())
    }

    fn check_deadline(&self) -> Result<()> {
        if self.cfg.expired() {
            return Err(Error::BudgetExceeded("time limit reached".into()));
        }
        Ok(())
    }

    fn seed(&mut self, x: usize, seeds: Seeds) -> Result<Vec<K>> {
        let cycles = enumerate_cycles(self.t, self.plan.nodes[x].a, seeds);
        let mut keys: Vec<K> = cycles.iter().map(|c| self.key(c)).collect();
        if self.orbits {
            keys.sort_unstable();
            keys.dedup();
        }
        self.hold(keys.len())?;
        Ok(keys)
    }

    fn key(&self, vars: &[u32]) -> K {
        if self.orbits {
            self.codec.encode(&orbit_representative(vars, self.t.lifting()))
        } else {
            self.codec.encode(vars)
        }
    }

    /// Instances represented by `keys` of a node with `a` variables.
    fn multiplicity(&self, keys: &[K], a: usize) -> u64 {
        if !self.orbits {
            return keys.len() as u64;
        }
        let lifting = self.t.lifting();
        keys.par_iter()
            .map_init(Vec::new, |v, k| {
                self.codec.decode(k, a, v);
                orbit_size(v, lifting)
            })
            .sum()
    }

    /// Size layers in order; stops at the first target node with an instance.
    fn find(&mut self) -> Result<Outcome> {
        let (t, plan) = (self.t, self.plan);
        let seeds = if self.cfg.qc_seeds && t.lifting() > 1 && t.num_vars() % t.lifting() as usize == 0 {
            Seeds::CopyZero
        } else {
            Seeds::All
        };
        let mut sets: Vec<Option<Vec<K>>> = vec![None; plan.nodes.len()];
        for &x in &self.prep.order {
            self.check_deadline()?;
            let node = &plan.nodes[x];
            let keys = match node.parent {
                None => self.seed(x, seeds)?,
                Some(_) => sets[x].take().unwrap_or_default(),
            };
            if node.is_target && !keys.is_empty() {
                let found = keys
                    .iter()
                    .map(|k| {
                        let mut v = Vec::with_capacity(node.a);
                        self.codec.decode(k, node.a, &mut v);
                        v
                    })
                    .collect();
                return Ok(Outcome::Found(x, found));
            }
            if !plan.children(x).is_empty() && !keys.is_empty() {
                for (child, list) in self.expand_all(x, &keys)? {
                    self.hold(list.len())?;
                    sets[child] = Some(list);
                }
            }
            self.live -= keys.len();
        }
        Ok(Outcome::Clean)
    }

    /// Depth first over the plan forest, so only the instance lists along
    /// one chain (and their siblings) are held at a time. On a
    /// quasi-cyclic graph every list holds orbit representatives: a shift
    /// maps the children of an instance onto the children of its image,
    /// so expanding one member per orbit reaches every child orbit.
    fn count(&mut self) -> Result<Vec<u64>> {
        let plan = self.plan;
        let mut counts = vec![0u64; plan.nodes.len()];
        let roots: Vec<usize> = self
            .prep
            .order
            .iter()
            .copied()
            .filter(|&x| plan.nodes[x].parent.is_none())
            .collect();
        let seeds = if self.orbits { Seeds::CopyZero } else { Seeds::All };
        for r in roots {
            let keys = self.seed(r, seeds)?;
            let mut stack = vec![(r, keys)];
            while let Some((x, keys)) = stack.pop() {
                self.check_deadline()?;
                counts[x] = self.multiplicity(&keys, plan.nodes[x].a);
                if !plan.children(x).is_empty() && !keys.is_empty() {
                    for (child, list) in self.expand_all(x, &keys)? {
                        self.hold(list.len())?;
                        stack.push((child, list));
                    }
                }
                self.live -= keys.len();
            }
        }
        Ok(counts)
    }

    /// Expands every instance of node `x` and routes matches to its children.
    fn expand_all(&self, x: usize, keys: &[K]) -> Result<Vec<(usize, Vec<K>)>> {
        let (t, codec, cfg, cancelled) = (self.t, self.codec, self.cfg, &self.cancelled);
        let this = self;
        let a = self.plan.nodes[x].a;
        let lookup = &self.prep.child_lookup[x];
        let exps = &self.prep.expansions[x];
        let mut grouped: BTreeMap<usize, Vec<K>> = BTreeMap::new();
        for chunk in keys.chunks(CHUNK) {
            let mut found: Vec<(u32, K)> = chunk
                .par_iter()
                .enumerate()
                .map_init(
                    || (Vec::new(), Vec::new()),
                    |(vars, cands), (i, key)| {
                        let mut out = Vec::new();
                        if cancelled.load(Ordering::Relaxed) {
                            return out;
                        }
                        if i % 256 == 0 && cfg.expired() {
                            cancelled.store(true, Ordering::Relaxed);
                            return out;
                        }
                        codec.decode(key, a, vars);
                        cands.clear();
                        for &e in exps {
                            candidates(t, vars, e, cands);
                        }
                        cands.sort_unstable();
                        cands.dedup();
                        for c in cands.iter() {
                            let Some(ind) = induce(t, c) else { continue };
                            if ind.graph.min_degree() < 2 {
                                continue;
                            }
                            let masks = canonical_form(&ind.graph).masks().to_vec();
                            if let Some(&child) = lookup.get(&masks) {
                                out.push((child as u32, this.key(c)));
                            }
                        }
                        out
                    },
                )
                .flatten()
                .collect();
            if cancelled.load(Ordering::Relaxed) {
                return Err(Error::BudgetExceeded("time limit reached".into()));
            }
            found.par_sort_unstable();
            found.dedup();
            for (c, k) in found {
                grouped.entry(c as usize).or_default().push(k);
            }
        }
        Ok(grouped
            .into_iter()
            .map(|(c, mut list)| {
                list.par_sort_unstable();
                list.dedup();
                list.shrink_to_fit();
                (c, list)
            })
            .collect())
    }
}

/// Runs a targeted plan and stops at the first size layer that contains an
/// instance of a target. Within a layer, chains are processed by root
/// cycle length. The witness is the smallest cyclic-shift orbit
/// representative among the instances of the first matching node, so it
/// does not depend on thread count or seeding.
///
/// The graph's girth must be at least the plan's girth; shorter cycles
/// are not seeded.
pub fn layered_find(t: &TannerGraph, plan: &SearchPlan, cfg: &SearchConfig) -> Result<Verdict> {
    match run(t, plan, cfg, Mode::Find)? {
        Outcome::Found(node, sets) => {
            let lifting = t.lifting();
            let rep = sets
                .iter()
                .map(|v| orbit_representative(v, lifting))
                .min()
                .expect("non-empty instance list");
            let instance = LetsInstance::from_vars(t, &rep)
                .ok_or_else(|| Error::InvalidArgument("witness failed re-verification".into()))?;
            let n = &plan.nodes[node];
            Ok(Verdict::Found(Witness {
                node,
                class: (n.a, n.b),
                instance,
            }))
        }
        _ => Ok(Verdict::Clean),
    }
}

/// Counts every instance of every target of a plan, per target node.
pub fn count_plan_instances(t: &TannerGraph, plan: &SearchPlan, cfg: &SearchConfig) -> Result<Vec<u64>> {
    match run(t, plan, cfg, Mode::Count)? {
        Outcome::Counted(c) => Ok(c),
        _ => unreachable!("counting never stops early"),
    }
}

/// Per-class multiplicities of the targets of an exhaustive plan. Every
/// class holding a target is listed, zeros included.
pub fn run_exhaustive(t: &TannerGraph, plan: &SearchPlan, cfg: &SearchConfig) -> Result<ClassCounts> {
    let per_node = count_plan_instances(t, plan, cfg)?;
    let mut counts = BTreeMap::new();
    for (i, n) in plan.nodes.iter().enumerate() {
        if n.is_target {
            *counts.entry((n.a, n.b)).or_insert(0) += per_node[i];
        }
    }
    Ok(ClassCounts { counts })
}

/// Exact multiplicities of connected LETS instances in every class of
/// `range`, using a structure database built for the graph's girth.
pub fn exhaustive_enumerate(
    t: &TannerGraph,
    db: &StructureDb,
    range: &TargetRange,
    cfg: &SearchConfig,
) -> Result<ClassCounts> {
    let g = bfs_girth(t, db.girth as u32);
    if !g.at_least(db.girth as u32) {
        return Err(Error::InvalidArgument(format!(
            "graph has {g}, below the database girth {}",
            db.girth
        )));
    }
    let plan = build_exhaustive_plan(db, range)?;
    let cfg = SearchConfig {
        qc_seeds: false,
        ..*cfg
    };
    run_exhaustive(t, &plan, &cfg)
}
