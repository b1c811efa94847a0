//! Exact chromatic index of small graphs.

use super::graph::NormalGraph;

/// True when the graph has more edges than `Delta` matchings can cover,
/// which forces chromatic index `Delta + 1`.
pub fn is_overfull(g: &NormalGraph) -> bool {
    g.edge_count() > (g.node_count() / 2) * g.max_degree()
}

/// Chromatic index: `Delta` for Class 1 graphs, `Delta + 1` for Class 2.
pub fn chromatic_index(g: &NormalGraph) -> usize {
    let delta = g.max_degree();
    if delta == 0 {
        return 0;
    }
    if is_overfull(g) || !colorable(g, delta) {
        delta + 1
    } else {
        delta
    }
}

/// Backtracking proper edge colouring with `k` colours.
pub fn colorable(g: &NormalGraph, k: usize) -> bool {
    if k >= 32 {
        return true;
    }
    let edges = bfs_edge_order(g);
    let mut used = vec![0u32; g.node_count()];
    let mut colors = vec![0usize; edges.len()];
    assign(&edges, 0, k, 0, &mut used, &mut colors)
}

fn assign(
    edges: &[(usize, usize)],
    i: usize,
    k: usize,
    next_fresh: usize,
    used: &mut [u32],
    colors: &mut [usize],
) -> bool {
    if i == edges.len() {
        return true;
    }
    let (u, v) = edges[i];
    let busy = used[u] | used[v];
    // Colours never used so far are interchangeable: try only the first one.
    let limit = (next_fresh + 1).min(k);
    for c in 0..limit {
        if busy >> c & 1 == 1 {
            continue;
        }
        used[u] |= 1 << c;
        used[v] |= 1 << c;
        colors[i] = c;
        let fresh = if c == next_fresh { next_fresh + 1 } else { next_fresh };
        if assign(edges, i + 1, k, fresh, used, colors) {
            return true;
        }
        used[u] &= !(1 << c);
        used[v] &= !(1 << c);
    }
    false
}

/// Edges in breadth-first order so that constrained edges are coloured early.
fn bfs_edge_order(g: &NormalGraph) -> Vec<(usize, usize)> {
    let n = g.node_count();
    let mut order = Vec::with_capacity(g.edge_count());
    let mut seen_node = vec![false; n];
    let mut taken = std::collections::HashSet::new();
    for start in 0..n {
        if seen_node[start] {
            continue;
        }
        seen_node[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                let e = (u.min(w), u.max(w));
                if taken.insert(e) {
                    order.push(e);
                }
                if !seen_node[w] {
                    seen_node[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles() {
        assert_eq!(chromatic_index(&NormalGraph::cycle(6)), 2);
        assert_eq!(chromatic_index(&NormalGraph::cycle(5)), 3);
        assert!(is_overfull(&NormalGraph::cycle(7)));
    }

    #[test]
    fn petersen_is_class_two() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        let p = NormalGraph::from_edges(10, &edges).unwrap();
        assert!(!is_overfull(&p));
        assert_eq!(chromatic_index(&p), 4);
    }

    #[test]
    fn k33_is_class_one() {
        let mut edges = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                edges.push((i, j));
            }
        }
        assert_eq!(chromatic_index(&NormalGraph::from_edges(6, &edges).unwrap()), 3);
    }
}
