//! Instance search against a brute-force subset oracle on small lifts.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qclets::lets::{StructureDb, TargetRange};
use qclets::plan::{build_plan, compute_target_set, parent_cover};
use qclets::qc::{lift_matrix, walk_girth, ExponentMatrix, TannerGraph};
use qclets::search::{
    enumerate_cycles, exhaustive_enumerate, layered_find, orbit_representative, shift_vars, LetsInstance, SearchConfig,
    Seeds, Verdict,
};

fn random_lift(rng: &mut ChaCha8Rng, m: usize, n: usize, lifting: u32, min_girth: u32) -> ExponentMatrix {
    loop {
        let rows: Vec<Vec<u32>> = (0..m)
            .map(|i| {
                (0..n)
                    .map(|j| if i == 0 || j == 0 { 0 } else { rng.gen_range(0..lifting) })
                    .collect()
            })
            .collect();
        let p = ExponentMatrix::from_rows(lifting, &rows).unwrap();
        if walk_girth(&p, 14).at_least(min_girth) {
            return p;
        }
    }
}

/// Per-class counts of connected leafless elementary sets of up to
/// `a_max` variables, by growing elementary connected sets one variable at
/// a time from scratch.
fn brute_force(t: &TannerGraph, a_max: usize, dv: usize) -> BTreeMap<(usize, usize), u64> {
    let nv = t.num_vars() as u32;
    let elementary = |set: &[u32]| {
        let mut hits: BTreeMap<u32, usize> = BTreeMap::new();
        for &v in set {
            for &c in t.var_checks(v) {
                *hits.entry(c).or_default() += 1;
            }
        }
        hits.values().all(|&h| h <= 2).then_some(hits)
    };
    let mut counts = BTreeMap::new();
    let mut level: HashSet<Vec<u32>> = (0..nv).map(|v| vec![v]).collect();
    for a in 1..=a_max {
        for set in &level {
            let hits = elementary(set).unwrap();
            let unsat = hits.values().filter(|&&h| h == 1).count();
            let leafless = set
                .iter()
                .all(|&v| t.var_checks(v).iter().filter(|c| hits[c] == 2).count() >= 2);
            if leafless {
                *counts.entry((a, unsat)).or_insert(0) += 1;
            }
            assert_eq!(unsat + 2 * hits.values().filter(|&&h| h == 2).count(), a * dv);
        }
        if a == a_max {
            break;
        }
        let mut next = HashSet::new();
        for set in &level {
            for &v in set {
                for &c in t.var_checks(v) {
                    for &w in t.check_vars(c) {
                        if set.contains(&w) {
                            continue;
                        }
                        let mut s = set.clone();
                        s.push(w);
                        s.sort_unstable();
                        if elementary(&s).is_some() {
                            next.insert(s);
                        }
                    }
                }
            }
        }
        level = next;
    }
    counts
}

#[test]
fn exhaustive_matches_subset_oracle_on_random_lifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let range = TargetRange::rect(6, 6);
    let db = StructureDb::build(&qclets::lets::DbParams::for_range(3, 6, &range)).unwrap();
    for trial in 0..6 {
        let n = if trial % 2 == 0 { 4 } else { 5 };
        let lifting = rng.gen_range(7..=13);
        let p = random_lift(&mut rng, 3, n, lifting, 6);
        let t = lift_matrix(&p);
        let got = exhaustive_enumerate(&t, &db, &range, &SearchConfig::default()).unwrap();
        let want = brute_force(&t, 6, 3);
        for (&(a, b), &c) in &want {
            assert_eq!(got.get(a, b), c, "class ({a},{b}) on\n{p}");
        }
        for (&(a, b), &c) in &got.counts {
            assert_eq!(want.get(&(a, b)).copied().unwrap_or(0), c, "class ({a},{b}) on\n{p}");
        }
        // The same graph without its lift structure is counted instance by
        // instance rather than by shift orbits.
        let vc = (0..t.num_vars() as u32).map(|v| t.var_checks(v).to_vec()).collect();
        let plain = TannerGraph::from_var_checks(t.num_checks(), vc, 1).unwrap();
        assert!(t.is_quasi_cyclic() && !plain.is_quasi_cyclic());
        assert_eq!(
            exhaustive_enumerate(&plain, &db, &range, &SearchConfig::default()).unwrap(),
            got
        );
    }
}

#[test]
fn exhaustive_matches_subset_oracle_on_column_weight_4_lifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    // b up to 8 includes two triangles sharing a variable.
    let range = TargetRange::rect(5, 8);
    let db = StructureDb::build(&qclets::lets::DbParams::for_range(4, 6, &range)).unwrap();
    for _ in 0..3 {
        let lifting = rng.gen_range(7..=11);
        let p = random_lift(&mut rng, 4, 5, lifting, 6);
        let t = lift_matrix(&p);
        let got = exhaustive_enumerate(&t, &db, &range, &SearchConfig::default()).unwrap();
        let want = brute_force(&t, 5, 4);
        for (&(a, b), &c) in &want {
            if range.contains(a, b) {
                assert_eq!(got.get(a, b), c, "class ({a},{b}) on\n{p}");
            }
        }
        assert!(got.counts.iter().all(|(k, &c)| c == want.get(k).copied().unwrap_or(0)));
    }
}

#[test]
fn exhaustive_matches_subset_oracle_up_to_seven_variables_at_column_weight_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let range = TargetRange::rect(7, 6);
    let db = StructureDb::build(&qclets::lets::DbParams::for_range(4, 6, &range)).unwrap();
    let lifting = rng.gen_range(7..=8);
    let p = random_lift(&mut rng, 4, 5, lifting, 6);
    let t = lift_matrix(&p);
    let got = exhaustive_enumerate(&t, &db, &range, &SearchConfig::default()).unwrap();
    let want = brute_force(&t, 7, 4);
    assert!(want[&(7, 6)] > 0);
    for (&(a, b), &c) in &want {
        if range.contains(a, b) {
            assert_eq!(got.get(a, b), c, "class ({a},{b}) on\n{p}");
        }
    }
}

#[test]
fn cycles_match_oracle_and_copy_zero_seeds_hit_every_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = random_lift(&mut rng, 3, 5, 11, 6);
    let t = lift_matrix(&p);
    let oracle = brute_force(&t, 4, 3);
    for k in 3..=4 {
        let all = enumerate_cycles(&t, k, Seeds::All);
        assert_eq!(all.len() as u64, oracle[&(k, k)], "k = {k}");
        for c in &all {
            let inst = LetsInstance::from_vars(&t, c).unwrap();
            assert_eq!(inst.class(3), (k, k));
        }
        let seeded = enumerate_cycles(&t, k, Seeds::CopyZero);
        assert!(seeded.iter().all(|c| c.iter().any(|v| v % 11 == 0)));
        let orbits =
            |list: &[Vec<u32>]| -> HashSet<Vec<u32>> { list.iter().map(|c| orbit_representative(c, 11)).collect() };
        assert_eq!(orbits(&all), orbits(&seeded));
    }
}

#[test]
fn layered_find_agrees_with_exhaustive_counts() {
    let range = TargetRange::rect(6, 3);
    let db = StructureDb::build(&qclets::lets::DbParams::for_range(3, 6, &range)).unwrap();
    let lt = compute_target_set(&db, &range).unwrap();
    let cover = parent_cover(&db, &lt).unwrap();
    let plan = build_plan(&db, &range, &lt, &cover).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = [0usize; 2];
    for trial in 0..20 {
        let lifting = rng.gen_range(9..=31);
        let p = random_lift(&mut rng, 3, 4, lifting, if trial % 2 == 0 { 6 } else { 8 });
        let t = lift_matrix(&p);
        let counts = exhaustive_enumerate(&t, &db, &range, &SearchConfig::default()).unwrap();
        let verdict = layered_find(&t, &plan, &SearchConfig::default()).unwrap();
        assert_eq!(verdict.is_clean(), counts.is_clean(), "{p}");
        seen[usize::from(verdict.is_clean())] += 1;
        if let Verdict::Found(w) = verdict {
            let again = LetsInstance::from_vars(&t, &w.instance.vars).unwrap();
            assert_eq!(again, w.instance);
            assert!(range.contains(w.class.0, w.class.1));
            assert_eq!(w.instance.class(3), w.class);
            assert!(counts.get(w.class.0, w.class.1) > 0);
            let shifted = shift_vars(&w.instance.vars, lifting, 1);
            assert_eq!(LetsInstance::from_vars(&t, &shifted).unwrap().cert, w.instance.cert);
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "both verdicts should occur: {seen:?}");
}

#[test]
fn witness_is_independent_of_thread_count_and_seeding() {
    let range = TargetRange::rect(6, 3);
    let db = StructureDb::build(&qclets::lets::DbParams::for_range(3, 6, &range)).unwrap();
    let lt = compute_target_set(&db, &range).unwrap();
    let cover = parent_cover(&db, &lt).unwrap();
    let plan = build_plan(&db, &range, &lt, &cover).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = random_lift(&mut rng, 3, 5, 13, 6);
    let t = lift_matrix(&p);
    let run = |threads: usize, qc_seeds: bool| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let cfg = SearchConfig {
            qc_seeds,
            ..SearchConfig::default()
        };
        pool.install(|| layered_find(&t, &plan, &cfg).unwrap())
    };
    let base = run(1, true);
    assert!(!base.is_clean());
    assert_eq!(run(4, true), base);
    assert_eq!(run(3, false), base);
}
