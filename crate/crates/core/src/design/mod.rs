//! Greedy column-by-column construction of exponent matrices and the
//! drivers for minimizing `N` or maximizing `a_max`.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lets::{DbParams, StructureDb, TargetRange};
use crate::plan::{plan_for_range, SearchPlan};
use crate::qc::{bfs_girth, lift_matrix, walk_girth, walk_girth_through, ExponentMatrix, Girth};
use crate::search::{exhaustive_enumerate, layered_find, ClassCounts, SearchConfig, Verdict};

/// Construction request for a fully-connected `m x n` base graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignSpec {
    pub rows: usize,
    pub cols: usize,
    /// Required girth `g0` (even, at least 6).
    pub girth: usize,
    pub ranges: TargetRange,
    pub lifting: u32,
    pub seed: u64,
    /// Wall-clock budget for one lifting degree.
    pub time_budget: Duration,
    /// Candidates tried per column visit before giving up on it; `None`
    /// exhausts the column.
    pub column_cap: Option<usize>,
    pub search: SearchConfig,
}

impl DesignSpec {
    pub fn new(rows: usize, cols: usize, girth: usize, ranges: TargetRange, lifting: u32, seed: u64) -> Self {
        DesignSpec {
            rows,
            cols,
            girth,
            ranges,
            lifting,
            seed,
            time_budget: Duration::from_secs(3 * 3600),
            column_cap: None,
            search: SearchConfig::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.girth < 6 || !self.girth.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "girth {} must be even and at least 6",
                self.girth
            )));
        }
        if self.rows < 2 || self.cols < 1 || self.lifting < 1 {
            return Err(Error::InvalidArgument(
                "base graph needs at least two rows and one column".into(),
            ));
        }
        Ok(())
    }
}

/// Counters collected during a construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DesignStats {
    pub candidates_tried: u64,
    pub girth_rejections: u64,
    pub lets_rejections: u64,
    pub backtracks: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignResult {
    /// Canonical exponent matrix.
    pub matrix: ExponentMatrix,
    pub girth: Girth,
    pub seed: u64,
    pub stats: DesignStats,
}

/// Assigns columns left to right. Each column (after the all-zero first
/// one) takes shift tuples in a seeded random order without repetition,
/// with the second-row entry kept non-decreasing. A candidate must keep the
/// girth at least `g0` on the assigned columns and leave the partial lift
/// free of planned structures; when a column runs out of candidates the
/// previous column moves to its next candidate. A column's order is
/// reshuffled every time it is re-entered from the left.
pub fn construct_fixed_n(spec: &DesignSpec, plan: &SearchPlan) -> Result<DesignResult> {
    spec.validate()?;
    let start = Instant::now();
    let deadline = start + spec.time_budget;
    let mut stats = DesignStats::default();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (m, n, big_n) = (spec.rows, spec.cols, spec.lifting);
    let mut p = ExponentMatrix::zeros(m, n, big_n);
    let cfg = SearchConfig {
        deadline: Some(spec.search.deadline.map_or(deadline, |d| d.min(deadline))),
        ..spec.search
    };
    if n == 1 {
        return finish(p, spec, stats, start);
    }
    let free = m - 1;
    // Per column: remaining candidate tuples, stored as encoded indices.
    let mut queues: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut tried_here: Vec<usize> = vec![0; n];
    let mut j = 1;
    queues[1] = column_order(&mut rng, big_n, free, 0);
    loop {
        if Instant::now() >= deadline {
            return Err(Error::BudgetExceeded(format!(
                "no matrix found within {:?}",
                spec.time_budget
            )));
        }
        let next = if spec.column_cap.is_some_and(|cap| tried_here[j] >= cap) {
            None
        } else {
            queues[j].pop()
        };
        let Some(code) = next else {
            if j == 1 {
                return Err(Error::Exhausted);
            }
            stats.backtracks += 1;
            j -= 1;
            continue;
        };
        tried_here[j] += 1;
        stats.candidates_tried += 1;
        let min_first = if j == 1 { 0 } else { p.get(1, j - 1).unwrap() };
        for (i, v) in decode(code, big_n, free, min_first).into_iter().enumerate() {
            p.set(i + 1, j, Some(v))?;
        }
        let partial = p.leading_columns(j + 1);
        if !walk_girth_through(&partial, &[j], spec.girth as u32).at_least(spec.girth as u32) {
            stats.girth_rejections += 1;
            continue;
        }
        match layered_find(&lift_matrix(&partial), plan, &cfg) {
            Ok(Verdict::Clean) => {}
            Ok(Verdict::Found(_)) => {
                stats.lets_rejections += 1;
                continue;
            }
            Err(e) => return Err(e),
        }
        if j + 1 == n {
            return finish(p, spec, stats, start);
        }
        j += 1;
        tried_here[j] = 0;
        let floor = p.get(1, j - 1).unwrap();
        queues[j] = column_order(&mut rng, big_n, free, floor);
    }
}

/// Shuffled codes of all shift tuples whose first entry is at least
/// `min_first`.
fn column_order(rng: &mut ChaCha8Rng, big_n: u32, free: usize, min_first: u32) -> Vec<u64> {
    let size = u64::from(big_n - min_first) * u64::from(big_n).pow(free as u32 - 1);
    let mut order: Vec<u64> = (0..size).collect();
    order.shuffle(rng);
    order
}

fn decode(mut code: u64, big_n: u32, free: usize, min_first: u32) -> Vec<u32> {
    let mut out = vec![0; free];
    for slot in out.iter_mut().skip(1).rev() {
        *slot = (code % u64::from(big_n)) as u32;
        code /= u64::from(big_n);
    }
    out[0] = min_first + code as u32;
    out
}

fn finish(p: ExponentMatrix, spec: &DesignSpec, mut stats: DesignStats, start: Instant) -> Result<DesignResult> {
    stats.elapsed = start.elapsed();
    let matrix = p.canonicalize()?;
    let girth = walk_girth(&matrix, crate::qc::DEFAULT_GIRTH_CAP);
    Ok(DesignResult {
        matrix,
        girth,
        seed: spec.seed,
        stats,
    })
}

/// Outcome of one lifting degree in a Problem (a) sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NOutcome {
    /// No matrix exists (the column search was exhaustive).
    Infeasible,
    TimedOut,
}

/// Smallest lifting degree reached and the per-`N` history below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemAResult {
    pub lifting: u32,
    pub result: DesignResult,
    pub below: Vec<(u32, NOutcome)>,
}

impl ProblemAResult {
    /// True when every smaller `N` in the sweep was proven infeasible.
    pub fn is_optimal_in_sweep(&self) -> bool {
        self.below.iter().all(|(_, o)| *o == NOutcome::Infeasible)
    }
}

/// Problem (a): increase `N` from `n_min` until a construction succeeds.
pub fn solve_problem_a(spec: &DesignSpec, n_min: u32, n_max: u32) -> Result<ProblemAResult> {
    let plan = plan_for_range(spec.rows, spec.girth, &spec.ranges)?;
    let mut below = Vec::new();
    for big_n in n_min..=n_max {
        let s = DesignSpec {
            lifting: big_n,
            ..spec.clone()
        };
        match construct_fixed_n(&s, &plan) {
            Ok(result) => {
                return Ok(ProblemAResult {
                    lifting: big_n,
                    result,
                    below,
                })
            }
            Err(Error::Exhausted) => below.push((big_n, NOutcome::Infeasible)),
            Err(Error::BudgetExceeded(_)) => below.push((big_n, NOutcome::TimedOut)),
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no lifting degree in {n_min}..={n_max} succeeded"
    )))
}

/// Problem (b): at fixed `N`, grow `a_max` (with `b <= b_max`) from
/// `girth / 2` while constructions succeed, up to `a_cap`. Returns the
/// largest `a_max` achieved and its matrix.
pub fn solve_problem_b(spec: &DesignSpec, b_max: usize, a_cap: usize) -> Result<(usize, DesignResult)> {
    let mut best: Option<(usize, DesignResult)> = None;
    for a_max in spec.girth / 2..=a_cap {
        let range = TargetRange::rect(a_max, b_max);
        let plan = plan_for_range(spec.rows, spec.girth, &range)?;
        let s = DesignSpec {
            ranges: range,
            ..spec.clone()
        };
        match construct_fixed_n(&s, &plan) {
            Ok(r) => best = Some((a_max, r)),
            Err(Error::Exhausted) | Err(Error::BudgetExceeded(_)) => break,
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::Exhausted)
}

/// Independent audit of an exponent matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub walk_girth: Girth,
    pub bfs_girth: Girth,
    /// Multiplicities in the audited region (empty if the girth check
    /// failed).
    pub counts: ClassCounts,
    pub clean: bool,
}

/// Girth by walks and by BFS, then an exhaustive count over `ranges`.
pub fn verify(p: &ExponentMatrix, girth: usize, ranges: &TargetRange, cfg: &SearchConfig) -> Result<AuditReport> {
    let cap = crate::qc::DEFAULT_GIRTH_CAP;
    let wg = walk_girth(p, cap);
    let t = lift_matrix(p);
    let bg = bfs_girth(&t, cap);
    if wg != bg {
        return Err(Error::InvalidArgument(format!("girth methods disagree: {wg} vs {bg}")));
    }
    if !wg.at_least(girth as u32) {
        return Ok(AuditReport {
            walk_girth: wg,
            bfs_girth: bg,
            counts: ClassCounts::default(),
            clean: false,
        });
    }
    let dv = t
        .var_degree()
        .ok_or_else(|| Error::InvalidArgument("graph is not variable-regular".into()))?;
    let db = StructureDb::build(&DbParams::for_range(dv, girth, ranges))?;
    let counts = exhaustive_enumerate(&t, &db, ranges, cfg)?;
    Ok(AuditReport {
        walk_girth: wg,
        bfs_girth: bg,
        clean: counts.is_clean(),
        counts,
    })
}
