//! Small simple graphs: normal graphs of elementary trapping sets.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Maximum number of nodes a [`NormalGraph`] can hold.
pub const MAX_NODES: usize = 32;

/// Simple undirected graph on at most [`MAX_NODES`] nodes, stored as
/// adjacency bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalGraph {
    adj: Vec<u32>,
}

impl NormalGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_NODES, "normal graphs are limited to {MAX_NODES} nodes");
        NormalGraph { adj: vec![0; n] }
    }

    /// Builds a graph from an edge list, rejecting loops and parallel edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_NODES {
            return Err(Error::InvalidArgument(format!("{n} nodes exceeds {MAX_NODES}")));
        }
        let mut g = NormalGraph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidArgument(format!("invalid edge ({u}, {v})")));
            }
            if g.has_edge(u, v) {
                return Err(Error::InvalidArgument(format!("parallel edge ({u}, {v})")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Simple cycle on `k` nodes.
    pub fn cycle(k: usize) -> Self {
        let mut g = NormalGraph::empty(k);
        for i in 0..k {
            g.add_edge(i, (i + 1) % k);
        }
        g
    }

    pub fn from_masks(adj: Vec<u32>) -> Self {
        NormalGraph { adj }
    }

    pub fn masks(&self) -> &[u32] {
        &self.adj
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.node_count()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.adj[v])
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    /// Appends an isolated node and returns its index.
    pub fn add_node(&mut self) -> usize {
        assert!(
            self.adj.len() < MAX_NODES,
            "normal graphs are limited to {MAX_NODES} nodes"
        );
        self.adj.push(0);
        self.adj.len() - 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.node_count() {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Relabels nodes: node `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> NormalGraph {
        let mut adj = vec![0u32; self.node_count()];
        for (u, &pu) in perm.iter().enumerate() {
            for v in self.neighbors(u) {
                adj[pu] |= 1 << perm[v];
            }
        }
        NormalGraph { adj }
    }

    /// Subgraph induced by the nodes in `keep` (bitmask), relabelled in
    /// increasing order.
    pub fn induced(&self, keep: u32) -> NormalGraph {
        let nodes: Vec<usize> = BitIter(keep).collect();
        let mut index = [usize::MAX; MAX_NODES];
        for (k, &v) in nodes.iter().enumerate() {
            index[v] = k;
        }
        let adj = nodes
            .iter()
            .map(|&v| BitIter(self.adj[v] & keep).fold(0u32, |m, w| m | 1 << index[w]))
            .collect();
        NormalGraph { adj }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0;
            for v in BitIter(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == full
    }

    /// Length of the shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.node_count();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for w in self.neighbors(u) {
                    if w == parent[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Distances from `src` (usize::MAX when unreachable).
    pub fn distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The `(a, b)` class this graph has as the normal graph of an
    /// elementary trapping set in a code with variable degree `dv`.
    pub fn class(&self, dv: usize) -> Result<(usize, usize)> {
        class_of(self, dv)
    }

    /// Compact `u-v` edge list, e.g. `0-1,1-2`.
    pub fn edge_string(&self) -> String {
        self.edges()
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the output of [`NormalGraph::edge_string`].
    pub fn parse_edges(n: usize, s: &str) -> Result<NormalGraph> {
        let mut edges = Vec::new();
        for tok in s.split(',').filter(|t| !t.is_empty()) {
            let (u, v) = tok
                .split_once('-')
                .ok_or_else(|| Error::InvalidArgument(format!("bad edge `{tok}`")))?;
            let parse = |x: &str| {
                x.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad node `{x}`")))
            };
            edges.push((parse(u)?, parse(v)?));
        }
        NormalGraph::from_edges(n, &edges)
    }
}

/// `(a, b)` with `a` the node count and `b = a*dv - 2|E|`.
pub fn class_of(g: &NormalGraph, dv: usize) -> Result<(usize, usize)> {
    for v in 0..g.node_count() {
        if g.degree(v) > dv {
            return Err(Error::DegreeOverflow {
                degree: g.degree(v),
                dv,
            });
        }
    }
    let a = g.node_count();
    Ok((a, a * dv - 2 * g.edge_count()))
}

/// Iterator over set bits of a mask, lowest first.
#[derive(Clone, Copy)]
pub struct BitIter(pub u32);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}
