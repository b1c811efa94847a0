//! Enumeration of chordless cycles of variable nodes.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::qc::TannerGraph;

/// Which cycles to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seeds {
    /// Every cycle.
    All,
    /// Only cycles containing a variable with copy index 0 (one or more
    /// members of every cyclic-shift orbit).
    CopyZero,
}

/// Variable sets of size `k` whose induced subgraph is elementary with a
/// normal graph equal to the `k`-cycle (a chordless `2k`-cycle in the
/// Tanner graph). For `k = 2` the pairs sharing two checks are returned.
/// Sets are sorted; the list is sorted and free of duplicates.
pub fn enumerate_cycles(t: &TannerGraph, k: usize, seeds: Seeds) -> Vec<Vec<u32>> {
    if k < 2 {
        return Vec::new();
    }
    let n = t.lifting();
    let starts: Vec<u32> = (0..t.num_vars() as u32)
        .filter(|&v| seeds == Seeds::All || v % n == 0)
        .collect();
    let mut out: Vec<Vec<u32>> = starts
        .par_iter()
        .map_init(
            || Scratch::new(t),
            |scratch, &r| {
                let mut found = Vec::new();
                if k == 2 {
                    pairs_from(t, r, seeds, &mut found);
                } else {
                    scratch.cycles_from(t, r, k, seeds, &mut found);
                }
                found
            },
        )
        .flatten()
        .collect();
    out.par_sort_unstable();
    out.dedup();
    out
}

/// Whether `w` may appear in a cycle rooted at `r`: in the full mode `r`
/// is the smallest member, in copy-zero mode the smallest copy-zero one.
fn allowed(w: u32, r: u32, n: u32, seeds: Seeds) -> bool {
    match seeds {
        Seeds::All => w > r,
        Seeds::CopyZero => w != r && (!w.is_multiple_of(n) || w > r),
    }
}

fn pairs_from(t: &TannerGraph, r: u32, seeds: Seeds, out: &mut Vec<Vec<u32>>) {
    let n = t.lifting();
    let mut seen: Vec<u32> = Vec::new();
    for &c in t.var_checks(r) {
        seen.extend(t.check_vars(c).iter().copied().filter(|&w| allowed(w, r, n, seeds)));
    }
    seen.sort_unstable();
    for w in seen.chunk_by(|x, y| x == y) {
        if w.len() == 2 {
            let mut p = vec![r, w[0]];
            p.sort_unstable();
            out.push(p);
        }
    }
}

struct Scratch {
    /// Path members touching each check.
    check_count: Vec<u8>,
    dist: Vec<u8>,
    touched: Vec<u32>,
    path: Vec<u32>,
}

const FAR: u8 = u8::MAX;

impl Scratch {
    fn new(t: &TannerGraph) -> Self {
        Scratch {
            check_count: vec![0; t.num_checks()],
            dist: vec![FAR; t.num_vars()],
            touched: Vec::new(),
            path: Vec::new(),
        }
    }

    fn cycles_from(&mut self, t: &TannerGraph, r: u32, k: usize, seeds: Seeds, out: &mut Vec<Vec<u32>>) {
        let n = t.lifting();
        self.bfs(t, r, k / 2, seeds);
        self.path.clear();
        self.path.push(r);
        for &c in t.var_checks(r) {
            self.check_count[c as usize] += 1;
        }
        self.extend(t, r, k, seeds, n, out);
        for &c in t.var_checks(r) {
            self.check_count[c as usize] -= 1;
        }
        for &v in &self.touched {
            self.dist[v as usize] = FAR;
        }
        self.touched.clear();
    }

    /// Distances from `r` over allowed variables, up to `depth`.
    fn bfs(&mut self, t: &TannerGraph, r: u32, depth: usize, seeds: Seeds) {
        let n = t.lifting();
        let mut queue = VecDeque::new();
        self.dist[r as usize] = 0;
        self.touched.push(r);
        queue.push_back(r);
        while let Some(v) = queue.pop_front() {
            let d = self.dist[v as usize];
            if d as usize >= depth {
                continue;
            }
            for &c in t.var_checks(v) {
                for &w in t.check_vars(c) {
                    if self.dist[w as usize] == FAR && allowed(w, r, n, seeds) {
                        self.dist[w as usize] = d + 1;
                        self.touched.push(w);
                        queue.push_back(w);
                    }
                }
            }
        }
    }

    fn extend(&mut self, t: &TannerGraph, r: u32, k: usize, seeds: Seeds, n: u32, out: &mut Vec<Vec<u32>>) {
        let pos = self.path.len();
        let last = *self.path.last().unwrap();
        let closing = pos == k - 1;
        for &d in t.var_checks(last) {
            if self.check_count[d as usize] != 1 {
                continue;
            }
            for &w in t.check_vars(d) {
                if w == last || !allowed(w, r, n, seeds) || self.path.contains(&w) {
                    continue;
                }
                // remaining steps back to r, including the closing one
                let back = k - pos;
                if self.dist[w as usize] as usize > back {
                    continue;
                }
                if closing && self.path[1] > w {
                    continue;
                }
                let mut marked = 0;
                let mut closes = false;
                let mut bad = false;
                for &c in t.var_checks(w) {
                    match self.check_count[c as usize] {
                        0 => {}
                        1 => {
                            marked += 1;
                            if c != d {
                                closes = t.var_checks(r).binary_search(&c).is_ok();
                            }
                        }
                        _ => bad = true,
                    }
                }
                if bad {
                    continue;
                }
                if closing {
                    if marked == 2 && closes && pos > 1 {
                        let mut cyc = self.path.clone();
                        cyc.push(w);
                        cyc.sort_unstable();
                        out.push(cyc);
                    }
                    continue;
                }
                if marked != 1 {
                    continue;
                }
                self.path.push(w);
                for &c in t.var_checks(w) {
                    self.check_count[c as usize] += 1;
                }
                self.extend(t, r, k, seeds, n, out);
                for &c in t.var_checks(w) {
                    self.check_count[c as usize] -= 1;
                }
                self.path.pop();
            }
        }
    }
}
