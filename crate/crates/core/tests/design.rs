//! Greedy constructor: feasibility against brute force, determinism and
//! re-verification of its output.

use std::time::Duration;

use qclets::design::{construct_fixed_n, verify, DesignSpec};
use qclets::lets::TargetRange;
use qclets::plan::{plan_for_range, SearchPlan};
use qclets::qc::{bfs_girth, lift_matrix, ExponentMatrix};
use qclets::search::SearchConfig;
use qclets::Error;

/// Whether some `3 x 4` exponent matrix with zero first row and column
/// lifts to girth at least 8, by BFS on every lift.
fn girth8_exists(lifting: u32) -> bool {
    let n = lifting;
    for code in 0..n.pow(6) {
        let mut c = code;
        let mut digit = || {
            let d = c % n;
            c /= n;
            d
        };
        let rows = vec![
            vec![0, 0, 0, 0],
            vec![0, digit(), digit(), digit()],
            vec![0, digit(), digit(), digit()],
        ];
        let p = ExponentMatrix::from_rows(lifting, &rows).unwrap();
        if bfs_girth(&lift_matrix(&p), 8).at_least(8) {
            return true;
        }
    }
    false
}

fn spec(cols: usize, girth: usize, range: &str, lifting: u32, seed: u64) -> DesignSpec {
    let mut s = DesignSpec::new(3, cols, girth, range.parse().unwrap(), lifting, seed);
    s.time_budget = Duration::from_secs(300);
    s
}

#[test]
fn girth_only_construction_agrees_with_brute_force() {
    let plan = SearchPlan::empty(3, 8);
    for lifting in 5..=9 {
        let want = girth8_exists(lifting);
        let got = construct_fixed_n(&spec(4, 8, "3:3", lifting, 1), &plan);
        match got {
            Ok(r) => {
                assert!(want, "N={lifting}: constructor found a matrix the oracle missed");
                assert!(bfs_girth(&lift_matrix(&r.matrix), 8).at_least(8));
                assert!(r.matrix.is_canonical());
            }
            Err(Error::Exhausted) => assert!(!want, "N={lifting}: constructor gave up on a feasible N"),
            Err(e) => panic!("N={lifting}: {e}"),
        }
    }
}

#[test]
fn single_column_succeeds_immediately() {
    let s = DesignSpec::new(3, 1, 8, TargetRange::rect(6, 3), 7, 0);
    let r = construct_fixed_n(&s, &SearchPlan::empty(3, 8)).unwrap();
    assert_eq!(r.matrix.cols(), 1);
    assert_eq!(r.stats.candidates_tried, 0);
}

#[test]
fn constructed_matrix_reverifies_and_is_reproducible() {
    let s = spec(4, 8, "6:3", 13, 42);
    let plan = plan_for_range(3, 8, &s.ranges).unwrap();
    let r = construct_fixed_n(&s, &plan).unwrap();
    let audit = verify(&r.matrix, 8, &s.ranges, &SearchConfig::default()).unwrap();
    assert!(audit.clean, "{:?}", audit.counts);
    assert_eq!(audit.walk_girth, audit.bfs_girth);
    let again = construct_fixed_n(&s, &plan).unwrap();
    assert_eq!(again.matrix, r.matrix);
    assert_eq!(again.stats.candidates_tried, r.stats.candidates_tried);
}

#[test]
fn budget_is_reported() {
    let mut s = spec(6, 8, "10:3", 200, 3);
    s.time_budget = Duration::ZERO;
    let plan = SearchPlan::empty(3, 8);
    assert!(matches!(construct_fixed_n(&s, &plan), Err(Error::BudgetExceeded(_))));
}

#[test]
fn rejects_bad_girth() {
    let s = spec(4, 7, "6:3", 13, 0);
    assert!(matches!(
        construct_fixed_n(&s, &SearchPlan::empty(3, 8)),
        Err(Error::InvalidArgument(_))
    ));
}
