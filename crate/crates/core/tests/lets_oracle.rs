//! Structure databases against graph-growth enumeration.

use std::collections::{BTreeMap, BTreeSet};

use qclets::lets::{
    canonical_certificate, chromatic_index, is_overfull, Certificate, DbParams, NormalGraph, StructureDb, TargetRange,
};

#[test]
fn four_node_graphs_have_eleven_isomorphism_classes() {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut certs = BTreeSet::new();
    for mask in 0u32..64 {
        let edges: Vec<(usize, usize)> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        certs.insert(canonical_certificate(&NormalGraph::from_edges(4, &edges).unwrap()));
    }
    assert_eq!(certs.len(), 11);
}

/// Connected graphs of max degree `dv` and girth at least `min_cycle` on up
/// to `a_max` nodes, grown one vertex at a time (every connected graph has
/// a vertex whose removal leaves it connected). Returns the per-class
/// counts of those with minimum degree 2.
fn grown_classes(dv: usize, min_cycle: usize, a_max: usize) -> BTreeMap<(usize, usize), usize> {
    let mut level: BTreeMap<Certificate, NormalGraph> = BTreeMap::new();
    let single = NormalGraph::empty(1);
    level.insert(canonical_certificate(&single), single);
    let mut out = BTreeMap::new();
    for n in 1..=a_max {
        for g in level.values() {
            if g.min_degree() >= 2 {
                *out.entry(g.class(dv).unwrap()).or_insert(0) += 1;
            }
        }
        if n == a_max {
            break;
        }
        let mut next = BTreeMap::new();
        for g in level.values() {
            let open: Vec<usize> = (0..n).filter(|&v| g.degree(v) < dv).collect();
            for subset in 1u32..1 << open.len() {
                if subset.count_ones() as usize > dv {
                    continue;
                }
                let mut h = g.clone();
                let v = h.add_node();
                for (i, &u) in open.iter().enumerate() {
                    if subset >> i & 1 == 1 {
                        h.add_edge(u, v);
                    }
                }
                if h.girth().is_none_or(|c| c >= min_cycle) {
                    next.entry(canonical_certificate(&h)).or_insert(h);
                }
            }
        }
        level = next;
    }
    out
}

fn db_classes(dv: usize, girth: usize, a_max: usize) -> BTreeMap<(usize, usize), usize> {
    let db = StructureDb::build(&DbParams {
        dv,
        girth,
        a_max,
        b_max_search: a_max * (dv - 2),
        reach: None,
        max_structures: 1_000_000,
    })
    .unwrap();
    let mut out = BTreeMap::new();
    for s in db.structures() {
        *out.entry(s.class()).or_insert(0) += 1;
    }
    out
}

#[test]
fn database_matches_growth_oracle_dv3_g6() {
    assert_eq!(db_classes(3, 6, 8), grown_classes(3, 3, 8));
}

#[test]
fn database_matches_growth_oracle_dv3_g8() {
    assert_eq!(db_classes(3, 8, 9), grown_classes(3, 4, 9));
}

#[test]
fn database_matches_growth_oracle_dv4_g6() {
    // Includes structures where two cycles meet at a degree-4 node.
    assert_eq!(db_classes(4, 6, 8), grown_classes(4, 3, 8));
}

#[test]
fn database_matches_growth_oracle_dv4_g8() {
    assert_eq!(db_classes(4, 8, 8), grown_classes(4, 4, 8));
}

#[test]
fn structure_invariants_on_a_targeted_database() {
    let range: TargetRange = "12:3".parse().unwrap();
    let db = StructureDb::build(&DbParams::for_range(3, 8, &range)).unwrap();
    for s in db.structures() {
        let g = &s.graph;
        assert_eq!(s.b, s.a * 3 - 2 * g.edge_count());
        assert!(g.min_degree() >= 2 && g.max_degree() <= 3);
        assert!(g.is_connected());
        assert!(g.girth().unwrap() >= 4);
        assert_eq!(s.root_cycle_len, g.girth().unwrap());
        assert_eq!(canonical_certificate(g), s.cert);
        let chi = chromatic_index(g);
        assert_eq!(chi, s.chromatic_index);
        assert!(chi == g.max_degree() || chi == g.max_degree() + 1);
        if is_overfull(g) {
            assert_eq!(chi, g.max_degree() + 1);
        }
    }
    for e in db.edges() {
        let (p, c) = (db.get(e.parent), db.get(e.child));
        assert_eq!(e.expansion.child_class(p.a, p.b, 3), Some(c.class()), "{}", e.expansion);
    }
}
