//! Girth from exponent matrices (closed walks with zero shift) and, as an
//! independent check, breadth-first search on the lifted graph.

use std::collections::VecDeque;
use std::fmt;

use crate::qc::matrix::ExponentMatrix;
use crate::qc::tanner::TannerGraph;

/// Default search cap for girth computations.
pub const DEFAULT_GIRTH_CAP: u32 = 14;

/// Outcome of a capped girth computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Girth {
    /// Shortest cycle has exactly this length.
    Exact(u32),
    /// No cycle shorter than this length exists.
    AtLeast(u32),
}

impl Girth {
    /// True when the girth is provably at least `g`.
    pub fn at_least(self, g: u32) -> bool {
        match self {
            Girth::Exact(v) => v >= g,
            Girth::AtLeast(v) => v >= g,
        }
    }

    /// Lower bound usable when choosing structure databases.
    pub fn lower_bound(self) -> u32 {
        match self {
            Girth::Exact(v) | Girth::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Exact(v) => write!(f, "girth {v}"),
            Girth::AtLeast(v) => write!(f, "girth >= {v}"),
        }
    }
}

/// Girth of the lift of `p`, searched over tailless backtrackless closed
/// walks of the base graph whose shift sum vanishes mod N.
///
/// Walks that revisit a lifted node before closing contain a shorter zero-shift
/// subwalk and are pruned, so the first closing length is a cycle length.
pub fn walk_girth(p: &ExponentMatrix, g_cap: u32) -> Girth {
    let cols: Vec<usize> = (0..p.cols()).collect();
    walk_girth_through(p, &cols, g_cap)
}

/// Shortest zero-shift closed walk passing through one of `start_cols`.
///
/// Used during column-by-column construction where all cycles avoiding the
/// newest column were already excluded.
pub fn walk_girth_through(p: &ExponentMatrix, start_cols: &[usize], g_cap: u32) -> Girth {
    let cap = g_cap - g_cap % 2;
    if cap < 4 {
        return Girth::AtLeast(cap);
    }
    let mut search = WalkSearch::new(p);
    let mut best = cap;
    for &j0 in start_cols {
        search.start = j0;
        search.bound = best - 2;
        if let Some(len) = search.run() {
            best = best.min(len);
        }
        if best == 4 {
            break;
        }
    }
    if best < cap {
        Girth::Exact(best)
    } else {
        Girth::AtLeast(cap)
    }
}

struct WalkSearch<'a> {
    p: &'a ExponentMatrix,
    n: i64,
    start: usize,
    bound: u32,
    /// rows present in each column
    col_rows: Vec<Vec<usize>>,
    /// columns present in each row
    row_cols: Vec<Vec<usize>>,
    path_vars: Vec<(usize, i64)>,
    path_checks: Vec<(usize, i64)>,
}

impl<'a> WalkSearch<'a> {
    fn new(p: &'a ExponentMatrix) -> Self {
        let col_rows = (0..p.cols())
            .map(|j| (0..p.rows()).filter(|&i| p.get(i, j).is_some()).collect())
            .collect();
        let row_cols = (0..p.rows())
            .map(|i| (0..p.cols()).filter(|&j| p.get(i, j).is_some()).collect())
            .collect();
        WalkSearch {
            p,
            n: p.lifting() as i64,
            start: 0,
            bound: 0,
            col_rows,
            row_cols,
            path_vars: Vec::new(),
            path_checks: Vec::new(),
        }
    }

    fn shift(&self, i: usize, j: usize) -> i64 {
        self.p.get(i, j).unwrap() as i64
    }

    fn run(&mut self) -> Option<u32> {
        self.path_vars.clear();
        self.path_checks.clear();
        self.path_vars.push((self.start, 0));
        let mut best = None;
        self.dfs(self.start, 0, usize::MAX, &mut best);
        best
    }

    /// At variable state `(col, t)`; `prev_row` is the row used to arrive.
    fn dfs(&mut self, col: usize, t: i64, prev_row: usize, best: &mut Option<u32>) {
        let len = 2 * self.path_checks.len() as u32;
        if len + 2 > self.bound.min(best.map_or(u32::MAX, |b| b - 2)) {
            return;
        }
        for ri in 0..self.col_rows[col].len() {
            let i = self.col_rows[col][ri];
            if i == prev_row {
                continue;
            }
            let s = (t + self.shift(i, col)).rem_euclid(self.n);
            if self.path_checks.contains(&(i, s)) {
                continue;
            }
            self.path_checks.push((i, s));
            for ci in 0..self.row_cols[i].len() {
                let j = self.row_cols[i][ci];
                if j == col {
                    continue;
                }
                let t2 = (s - self.shift(i, j)).rem_euclid(self.n);
                let closing = len + 2;
                if (j, t2) == (self.start, 0) {
                    if closing >= 4 && best.is_none_or(|b| closing < b) {
                        *best = Some(closing);
                    }
                    continue;
                }
                if self.path_vars.contains(&(j, t2)) {
                    continue;
                }
                self.path_vars.push((j, t2));
                self.dfs(j, t2, i, best);
                self.path_vars.pop();
            }
            self.path_checks.pop();
        }
    }
}

/// Girth of an arbitrary Tanner graph by breadth-first search from every
/// variable node, capped at `g_cap`.
pub fn bfs_girth(g: &TannerGraph, g_cap: u32) -> Girth {
    let cap = g_cap - g_cap % 2;
    let nv = g.num_vars();
    let total = nv + g.num_checks();
    let mut dist = vec![u32::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut best = cap;
    for root in 0..nv {
        for &x in &touched {
            dist[x] = u32::MAX;
            parent[x] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            let nbrs: Vec<usize> = if u < nv {
                g.var_checks(u as u32).iter().map(|&c| nv + c as usize).collect()
            } else {
                g.check_vars((u - nv) as u32).iter().map(|&v| v as usize).collect()
            };
            for w in nbrs {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    let len = dist[u] + dist[w] + 1;
                    if len < best {
                        best = len;
                    }
                    if best <= 4 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 4 {
            break;
        }
    }
    if best < cap {
        Girth::Exact(best)
    } else {
        Girth::AtLeast(cap)
    }
}
