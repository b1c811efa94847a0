//! Canonical labelling of small graphs by individualization-refinement.
//!
//! Colour refinement is run to a stable partition; the first non-singleton
//! cell is split by individualizing each of its vertices in turn, and the
//! lexicographically largest relabelled adjacency among all discrete leaves
//! is the canonical form. No automorphism pruning: the graphs handled here
//! have at most a few dozen nodes and modest symmetry.

use std::fmt;

use super::graph::{BitIter, NormalGraph};

/// Isomorphism-invariant label of a [`NormalGraph`].
///
/// Two graphs receive equal certificates iff they are isomorphic. The text
/// form is `<nodes>:<hex adjacency>`, stable across platforms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate(String);

impl Certificate {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Parses a certificate string, checking only its outer shape.
    pub fn parse(s: &str) -> Option<Certificate> {
        let (n, hex) = s.split_once(':')?;
        n.parse::<usize>().ok()?;
        if hex.chars().all(|c| c.is_ascii_hexdigit()) {
            Some(Certificate(s.to_string()))
        } else {
            None
        }
    }

    /// Rebuilds the canonical representative graph.
    pub fn to_graph(&self) -> Option<NormalGraph> {
        let (n, hex) = self.0.split_once(':')?;
        let n: usize = n.parse().ok()?;
        let bits = hex_to_bits(hex);
        let mut g = NormalGraph::empty(n);
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if *bits.get(k)? {
                    g.add_edge(u, v);
                }
                k += 1;
            }
        }
        Some(g)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Canonical relabelling: returns `perm` with `perm[v]` the canonical index
/// of node `v`.
pub fn canonical_labeling(g: &NormalGraph) -> Vec<usize> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let colors: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
    let colors = refine(g, rerank(&colors));
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    search(g, colors, &mut best);
    best.expect("at least one leaf").1
}

/// The canonical form of `g` (isomorphic to `g`).
pub fn canonical_form(g: &NormalGraph) -> NormalGraph {
    g.permuted(&canonical_labeling(g))
}

pub fn canonical_certificate(g: &NormalGraph) -> Certificate {
    certificate_of_canonical(&canonical_form(g))
}

/// Certificate of a graph that is already in canonical form.
pub(crate) fn certificate_of_canonical(c: &NormalGraph) -> Certificate {
    let n = c.node_count();
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            bits.push(c.has_edge(u, v));
        }
    }
    Certificate(format!("{n}:{}", bits_to_hex(&bits)))
}

fn search(g: &NormalGraph, colors: Vec<u32>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
    let n = colors.len();
    let mut count = vec![0usize; n];
    for &c in &colors {
        count[c as usize] += 1;
    }
    let target = (0..n).find(|&c| count[c] > 1);
    match target {
        None => {
            let perm: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
            let key = g.permuted(&perm).masks().to_vec();
            if best.as_ref().is_none_or(|(b, _)| key > *b) {
                *best = Some((key, perm));
            }
        }
        Some(cell) => {
            for v in (0..n).filter(|&v| colors[v] as usize == cell) {
                let split: Vec<u32> = (0..n)
                    .map(|x| 2 * colors[x] + u32::from(colors[x] as usize == cell && x != v))
                    .collect();
                search(g, refine(g, rerank(&split)), best);
            }
        }
    }
}

/// Maps arbitrary colour values to dense ranks, preserving order.
fn rerank(keys: &[u32]) -> Vec<u32> {
    let mut sorted: Vec<u32> = keys.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect()
}

/// Colour refinement until the number of cells stops growing.
fn refine(g: &NormalGraph, mut colors: Vec<u32>) -> Vec<u32> {
    let n = colors.len();
    let mut cells = distinct(&colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = BitIter(g.masks()[v]).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u32> = sigs.iter().map(|s| sorted.binary_search(s).unwrap() as u32).collect();
        let next_cells = sorted.len();
        colors = next;
        if next_cells == cells {
            return colors;
        }
        cells = next_cells;
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn bits_to_hex(bits: &[bool]) -> String {
    bits.chunks(4)
        .map(|ch| {
            let v = ch
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << (3 - i)));
            char::from_digit(v, 16).unwrap()
        })
        .collect()
}

fn hex_to_bits(hex: &str) -> Vec<bool> {
    hex.chars()
        .filter_map(|c| c.to_digit(16))
        .flat_map(|v| (0..4).map(move |i| v >> (3 - i) & 1 == 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_cycles_share_a_certificate() {
        let c5 = NormalGraph::cycle(5);
        let other = c5.permuted(&[3, 0, 4, 1, 2]);
        assert_eq!(canonical_certificate(&c5), canonical_certificate(&other));
    }

    #[test]
    fn kite_differs_from_cycle() {
        let kite = NormalGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 2)]).unwrap();
        assert_ne!(
            canonical_certificate(&kite),
            canonical_certificate(&NormalGraph::cycle(5))
        );
    }

    #[test]
    fn certificate_round_trips_to_graph() {
        let g = NormalGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let cert = canonical_certificate(&g);
        let back = cert.to_graph().unwrap();
        assert_eq!(canonical_certificate(&back), cert);
        assert_eq!(Certificate::parse(cert.as_str()), Some(cert));
    }
}
