//! Lifted Tanner graphs and their parity-check views.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::qc::matrix::{BaseGraph, ExponentMatrix};

/// Bipartite Tanner graph produced by a cyclic lift (or read from alist).
///
/// Adjacency lists are sorted. Variable `v` of a lift belongs to column
/// block `v / N` and has copy index `v % N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    var_checks: Vec<Vec<u32>>,
    check_vars: Vec<Vec<u32>>,
    lifting: u32,
}

impl TannerGraph {
    /// Builds a graph from per-variable check lists.
    pub fn from_var_checks(num_checks: usize, mut var_checks: Vec<Vec<u32>>, lifting: u32) -> Result<Self> {
        let mut check_vars = vec![Vec::new(); num_checks];
        for (v, checks) in var_checks.iter_mut().enumerate() {
            checks.sort_unstable();
            if checks.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!("variable {v} has a repeated check")));
            }
            for &c in checks.iter() {
                let slot = check_vars
                    .get_mut(c as usize)
                    .ok_or_else(|| Error::InvalidArgument(format!("check index {c} out of range")))?;
                slot.push(v as u32);
            }
        }
        Ok(TannerGraph {
            var_checks,
            check_vars,
            lifting: lifting.max(1),
        })
    }

    pub fn num_vars(&self) -> usize {
        self.var_checks.len()
    }

    pub fn num_checks(&self) -> usize {
        self.check_vars.len()
    }

    /// Lifting degree the graph was built with (1 for unstructured graphs).
    pub fn lifting(&self) -> u32 {
        self.lifting
    }

    /// Whether shifting every copy index by one (variables and checks
    /// alike) is an automorphism, as it is for any cyclic lift.
    pub fn is_quasi_cyclic(&self) -> bool {
        let n = self.lifting;
        if n < 2 || !self.num_vars().is_multiple_of(n as usize) || !self.num_checks().is_multiple_of(n as usize) {
            return false;
        }
        let shift = |x: u32| x - x % n + (x % n + 1) % n;
        let mut image = Vec::new();
        self.var_checks.iter().enumerate().all(|(v, checks)| {
            image.clear();
            image.extend(checks.iter().map(|&c| shift(c)));
            image.sort_unstable();
            image == self.var_checks[shift(v as u32) as usize]
        })
    }

    pub fn var_checks(&self, v: u32) -> &[u32] {
        &self.var_checks[v as usize]
    }

    pub fn check_vars(&self, c: u32) -> &[u32] {
        &self.check_vars[c as usize]
    }

    /// Common variable degree, if the graph is variable-regular.
    pub fn var_degree(&self) -> Option<usize> {
        let d = self.var_checks.first()?.len();
        self.var_checks.iter().all(|c| c.len() == d).then_some(d)
    }

    pub fn max_check_degree(&self) -> usize {
        self.check_vars.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of edges.
    pub fn num_edges(&self) -> usize {
        self.var_checks.iter().map(Vec::len).sum()
    }

    /// Variables sharing at least one check with each variable, sorted.
    pub fn var_neighbors(&self) -> Vec<Vec<u32>> {
        self.var_checks
            .iter()
            .enumerate()
            .map(|(v, checks)| {
                let mut nb: Vec<u32> = checks
                    .iter()
                    .flat_map(|&c| self.check_vars[c as usize].iter().copied())
                    .filter(|&w| w as usize != v)
                    .collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect()
    }

    /// Parity-check matrix in alist format (1-indexed, zero padded).
    pub fn to_alist(&self) -> String {
        let n = self.num_vars();
        let m = self.num_checks();
        let max_col = self.var_checks.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.max_check_degree();
        let mut s = String::new();
        let _ = writeln!(s, "{n} {m}");
        let _ = writeln!(s, "{max_col} {max_row}");
        let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "{}", join(&mut self.var_checks.iter().map(|c| c.len().to_string())));
        let _ = writeln!(s, "{}", join(&mut self.check_vars.iter().map(|c| c.len().to_string())));
        for (lists, width) in [(&self.var_checks, max_col), (&self.check_vars, max_row)] {
            for l in lists {
                let mut toks: Vec<String> = l.iter().map(|&x| (x + 1).to_string()).collect();
                toks.resize(width, "0".to_string());
                let _ = writeln!(s, "{}", toks.join(" "));
            }
        }
        s
    }

    /// Parses alist text; zero entries are treated as padding.
    pub fn from_alist(text: &str) -> Result<Self> {
        let mut toks = text
            .lines()
            .enumerate()
            .flat_map(|(k, l)| l.split_whitespace().map(move |t| (k + 1, t)));
        let mut next = |what: &str| -> Result<(usize, usize)> {
            let (line, t) = toks
                .next()
                .ok_or_else(|| Error::parse(0, format!("unexpected end of input reading {what}")))?;
            t.parse::<usize>()
                .map(|v| (line, v))
                .map_err(|_| Error::parse(line, format!("bad integer `{t}` in {what}")))
        };
        let (_, n) = next("column count")?;
        let (_, m) = next("row count")?;
        let (_, max_col) = next("max column weight")?;
        let (_, max_row) = next("max row weight")?;
        let mut col_w = Vec::with_capacity(n);
        for _ in 0..n {
            col_w.push(next("column weights")?.1);
        }
        let mut row_w = Vec::with_capacity(m);
        for _ in 0..m {
            row_w.push(next("row weights")?.1);
        }
        let mut var_checks = Vec::with_capacity(n);
        for &w in &col_w {
            let mut list = Vec::with_capacity(w);
            for _ in 0..max_col {
                let (line, v) = next("column lists")?;
                if v > m {
                    return Err(Error::parse(line, format!("row index {v} exceeds {m}")));
                }
                if v > 0 {
                    list.push((v - 1) as u32);
                }
            }
            if list.len() != w {
                return Err(Error::parse(0, "column list disagrees with its weight"));
            }
            var_checks.push(list);
        }
        let g = TannerGraph::from_var_checks(m, var_checks, 1)?;
        for (c, &w) in row_w.iter().enumerate() {
            if g.check_vars[c].len() != w {
                return Err(Error::parse(
                    0,
                    format!("row {} weight disagrees with its lists", c + 1),
                ));
            }
            for _ in 0..max_row {
                next("row lists")?;
            }
        }
        Ok(g)
    }

    /// Dense rows of the parity-check matrix packed into 64-bit words.
    pub fn dense_rows(&self) -> Vec<Vec<u64>> {
        let words = self.num_vars().div_ceil(64);
        self.check_vars
            .iter()
            .map(|vars| {
                let mut row = vec![0u64; words];
                for &v in vars {
                    row[v as usize / 64] ^= 1 << (v % 64);
                }
                row
            })
            .collect()
    }

    /// GF(2) rank of the parity-check matrix.
    pub fn gf2_rank(&self) -> usize {
        gf2_rank(self.dense_rows())
    }

    /// Code dimension `n - rank(H)`.
    pub fn dimension(&self) -> usize {
        self.num_vars() - self.gf2_rank()
    }

    /// True when `word` (one bit per variable) satisfies every check.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        self.check_vars
            .iter()
            .all(|vars| vars.iter().fold(0u8, |acc, &v| acc ^ (word[v as usize] & 1)) == 0)
    }
}

/// Gaussian elimination over GF(2) on packed rows.
pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..words * 64 {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Cyclic `N`-lift of the base graph described by `p`.
pub fn lift(base: &BaseGraph, p: &ExponentMatrix) -> Result<TannerGraph> {
    p.check_against(base)?;
    Ok(lift_matrix(p))
}

/// Lifts an exponent matrix using its own edge mask.
pub fn lift_matrix(p: &ExponentMatrix) -> TannerGraph {
    let n_lift = p.lifting();
    let nn = n_lift as usize;
    let mut var_checks = Vec::with_capacity(p.cols() * nn);
    for j in 0..p.cols() {
        for t in 0..n_lift {
            let checks = (0..p.rows())
                .filter_map(|i| p.get(i, j).map(|s| i as u32 * n_lift + (t + s) % n_lift))
                .collect();
            var_checks.push(checks);
        }
    }
    TannerGraph::from_var_checks(p.rows() * nn, var_checks, n_lift).expect("lifted adjacency is always well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense H built block by block from circulants with rows shifted left.
    fn dense_from_circulants(p: &ExponentMatrix) -> Vec<Vec<u8>> {
        let n = p.lifting() as usize;
        let mut h = vec![vec![0u8; p.cols() * n]; p.rows() * n];
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                if let Some(s) = p.get(i, j) {
                    for r in 0..n {
                        let c = (r + n - s as usize % n) % n;
                        h[i * n + r][j * n + c] = 1;
                    }
                }
            }
        }
        h
    }

    #[test]
    fn lift_matches_explicit_circulant_blocks() {
        for p in [
            ExponentMatrix::zeros(2, 2, 3),
            ExponentMatrix::from_rows(5, &[vec![0, 1, 2], vec![3, 0, 4]]).unwrap(),
            ExponentMatrix::new(2, 3, 4, vec![Some(1), None, Some(3), Some(0), Some(2), None]).unwrap(),
        ] {
            let g = lift_matrix(&p);
            let h = dense_from_circulants(&p);
            for (c, row) in h.iter().enumerate() {
                let ones: Vec<u32> = (0..row.len() as u32).filter(|&v| row[v as usize] == 1).collect();
                assert_eq!(g.check_vars(c as u32), ones.as_slice());
            }
        }
    }

    #[test]
    fn trivial_lift_is_the_base_graph() {
        let p = ExponentMatrix::zeros(3, 4, 1);
        let g = lift_matrix(&p);
        assert_eq!(g.num_vars(), 4);
        assert_eq!(g.num_checks(), 3);
        for v in 0..4 {
            assert_eq!(g.var_checks(v), &[0, 1, 2]);
        }
    }

    #[test]
    fn alist_round_trip() {
        let p = ExponentMatrix::new(2, 3, 4, vec![Some(1), None, Some(3), Some(0), Some(2), None]).unwrap();
        let g = lift_matrix(&p);
        let text = g.to_alist();
        let back = TannerGraph::from_alist(&text).unwrap();
        assert_eq!(back.to_alist(), text);
        for v in 0..g.num_vars() as u32 {
            assert_eq!(back.var_checks(v), g.var_checks(v));
        }
    }

    #[test]
    fn identity_block_has_full_rank() {
        let p = ExponentMatrix::zeros(1, 1, 9);
        assert_eq!(lift_matrix(&p).gf2_rank(), 9);
    }

    fn rank_by_elimination(mut h: Vec<Vec<u8>>) -> usize {
        let cols = h.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            if let Some(r) = (rank..h.len()).find(|&r| h[r][c] == 1) {
                h.swap(rank, r);
                for r2 in 0..h.len() {
                    if r2 != rank && h[r2][c] == 1 {
                        for k in 0..cols {
                            h[r2][k] ^= h[rank][k];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn packed_rank_matches_byte_elimination() {
        let p = ExponentMatrix::from_rows(5, &[vec![0, 0, 0, 0], vec![0, 1, 2, 4], vec![0, 3, 1, 2]]).unwrap();
        let g = lift_matrix(&p);
        assert_eq!(g.gf2_rank(), rank_by_elimination(dense_from_circulants(&p)));
    }
}
