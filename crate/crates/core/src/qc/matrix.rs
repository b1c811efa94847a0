//! Base graphs and exponent matrices.
//!
//! An exponent matrix assigns a circulant shift to every edge of an `m x n`
//! base graph. Entry `(i, j)` with shift `p` connects variable `j*N + t` to
//! check `i*N + (t + p) mod N` in the lifted graph.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Protograph: `m` check blocks, `n` variable blocks, and an edge mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseGraph {
    m: usize,
    n: usize,
    mask: Vec<bool>,
}

impl BaseGraph {
    pub fn fully_connected(m: usize, n: usize) -> Self {
        BaseGraph {
            m,
            n,
            mask: vec![true; m * n],
        }
    }

    pub fn with_mask(m: usize, n: usize, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != m * n {
            return Err(Error::Shape {
                expected: format!("{} mask entries", m * n),
                found: mask.len().to_string(),
            });
        }
        Ok(BaseGraph { m, n, mask })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.n + col]
    }

    pub fn is_fully_connected(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }

    /// Variable degree of column block `col`.
    pub fn col_degree(&self, col: usize) -> usize {
        (0..self.m).filter(|&i| self.has_edge(i, col)).count()
    }

    /// Check degree of row block `row`.
    pub fn row_degree(&self, row: usize) -> usize {
        (0..self.n).filter(|&j| self.has_edge(row, j)).count()
    }
}

/// Matrix of circulant shifts plus the lifting degree `N`.
///
/// `None` marks an absent edge (the all-zero block).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    m: usize,
    n: usize,
    lifting: u32,
    entries: Vec<Option<u32>>,
}

impl ExponentMatrix {
    /// Builds a matrix from row-major entries, validating every shift.
    pub fn new(m: usize, n: usize, lifting: u32, entries: Vec<Option<u32>>) -> Result<Self> {
        if lifting == 0 {
            return Err(Error::InvalidArgument("lifting degree must be positive".into()));
        }
        if entries.len() != m * n {
            return Err(Error::Shape {
                expected: format!("{m}x{n} = {} entries", m * n),
                found: entries.len().to_string(),
            });
        }
        for (k, e) in entries.iter().enumerate() {
            if let Some(v) = *e {
                if v >= lifting {
                    return Err(Error::EntryOutOfRange {
                        row: k / n,
                        col: k % n,
                        value: v,
                        lifting,
                    });
                }
            }
        }
        Ok(ExponentMatrix { m, n, lifting, entries })
    }

    /// Fully-connected matrix from nested rows of shifts.
    pub fn from_rows(lifting: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape {
                expected: format!("{n} columns"),
                found: bad.len().to_string(),
            });
        }
        let entries = rows.iter().flatten().map(|&v| Some(v)).collect();
        Self::new(m, n, lifting, entries)
    }

    pub fn zeros(m: usize, n: usize, lifting: u32) -> Self {
        ExponentMatrix {
            m,
            n,
            lifting,
            entries: vec![Some(0); m * n],
        }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn lifting(&self) -> u32 {
        self.lifting
    }

    pub fn get(&self, row: usize, col: usize) -> Option<u32> {
        self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Option<u32>) -> Result<()> {
        if let Some(v) = value {
            if v >= self.lifting {
                return Err(Error::EntryOutOfRange {
                    row,
                    col,
                    value: v,
                    lifting: self.lifting,
                });
            }
        }
        self.entries[row * self.n + col] = value;
        Ok(())
    }

    pub fn base(&self) -> BaseGraph {
        BaseGraph {
            m: self.m,
            n: self.n,
            mask: self.entries.iter().map(Option::is_some).collect(),
        }
    }

    /// Checks that the present entries coincide with the base graph's mask.
    pub fn check_against(&self, base: &BaseGraph) -> Result<()> {
        if base.rows() != self.m || base.cols() != self.n {
            return Err(Error::Shape {
                expected: format!("{}x{}", base.rows(), base.cols()),
                found: format!("{}x{}", self.m, self.n),
            });
        }
        for i in 0..self.m {
            for j in 0..self.n {
                if base.has_edge(i, j) != self.get(i, j).is_some() {
                    return Err(Error::Shape {
                        expected: format!("mask bit at ({i}, {j}) = {}", base.has_edge(i, j)),
                        found: format!("{:?}", self.get(i, j)),
                    });
                }
            }
        }
        Ok(())
    }

    /// The submatrix made of the first `cols` column blocks.
    pub fn leading_columns(&self, cols: usize) -> ExponentMatrix {
        let cols = cols.min(self.n);
        let mut entries = Vec::with_capacity(self.m * cols);
        for i in 0..self.m {
            for j in 0..cols {
                entries.push(self.get(i, j));
            }
        }
        ExponentMatrix {
            m: self.m,
            n: cols,
            lifting: self.lifting,
            entries,
        }
    }

    /// Adds `delta` (mod N) to every present entry of one row block.
    pub fn shift_row(&mut self, row: usize, delta: u32) {
        let n = self.lifting;
        for j in 0..self.n {
            if let Some(v) = self.entries[row * self.n + j].as_mut() {
                *v = (*v + delta % n) % n;
            }
        }
    }

    /// Adds `delta` (mod N) to every present entry of one column block.
    pub fn shift_col(&mut self, col: usize, delta: u32) {
        let n = self.lifting;
        for i in 0..self.m {
            if let Some(v) = self.entries[i * self.n + col].as_mut() {
                *v = (*v + delta % n) % n;
            }
        }
    }

    /// Normal form with zero first row and column and a non-decreasing
    /// second row; the lifted graph is isomorphic to the input's.
    ///
    /// Columns tied on the second row are ordered by the remaining rows, which
    /// keeps the operation idempotent.
    pub fn canonicalize(&self) -> Result<ExponentMatrix> {
        if self.entries.iter().any(Option::is_none) {
            return Err(Error::NotFullyConnected);
        }
        let n_mod = self.lifting as i64;
        let at = |i: usize, j: usize| self.get(i, j).unwrap() as i64;
        let mut cols: Vec<Vec<u32>> = (0..self.n)
            .map(|j| {
                (0..self.m)
                    .map(|i| (at(i, j) - at(i, 0) - at(0, j) + at(0, 0)).rem_euclid(n_mod) as u32)
                    .collect()
            })
            .collect();
        if self.n > 1 {
            let rest = &mut cols[1..];
            rest.sort_by(|a, b| a[1..].cmp(&b[1..]));
        }
        let mut entries = Vec::with_capacity(self.m * self.n);
        for i in 0..self.m {
            for col in &cols {
                entries.push(Some(col[i]));
            }
        }
        Ok(ExponentMatrix {
            m: self.m,
            n: self.n,
            lifting: self.lifting,
            entries,
        })
    }

    /// True when the matrix already has the normal shape produced by
    /// [`ExponentMatrix::canonicalize`].
    pub fn is_canonical(&self) -> bool {
        self.canonicalize().is_ok_and(|c| &c == self)
    }
}

impl fmt::Display for ExponentMatrix {
    /// Text format: `m n N`, then one line per row block, `-` for absent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.m, self.n, self.lifting)?;
        for i in 0..self.m {
            let line: Vec<String> = (0..self.n)
                .map(|j| match self.get(i, j) {
                    Some(v) => v.to_string(),
                    None => "-".to_string(),
                })
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for ExponentMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 3 {
            return Err(Error::parse(hl, "header must be `m n N`"));
        }
        let parse_dim = |t: &str| -> Result<usize> {
            t.parse::<usize>()
                .map_err(|_| Error::parse(hl, format!("bad dimension `{t}`")))
        };
        let m = parse_dim(dims[0])?;
        let n = parse_dim(dims[1])?;
        let lifting = parse_dim(dims[2])? as u32;
        let mut entries = Vec::with_capacity(m * n);
        for row in 0..m {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(hl + row + 1, format!("missing row {row}")))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != n {
                return Err(Error::parse(ln, format!("expected {n} entries, got {}", toks.len())));
            }
            for t in toks {
                if t == "-" {
                    entries.push(None);
                } else {
                    let v = t
                        .parse::<u32>()
                        .map_err(|_| Error::parse(ln, format!("bad shift `{t}`")))?;
                    entries.push(Some(v));
                }
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing content after the last row"));
        }
        ExponentMatrix::new(m, n, lifting, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_with_absent_entries() {
        let text = "2 3 7\n0 - 3\n6 1 -\n";
        let p: ExponentMatrix = text.parse().unwrap();
        assert_eq!(p.get(0, 1), None);
        assert_eq!(p.get(1, 0), Some(6));
        assert_eq!(p.to_string(), text);
    }

    #[test]
    fn rejects_out_of_range_entry() {
        let err = "1 2 5\n0 5\n".parse::<ExponentMatrix>().unwrap_err();
        assert!(matches!(err, Error::EntryOutOfRange { value: 5, .. }));
    }

    #[test]
    fn rejects_short_row() {
        let err = "2 2 5\n0 1\n3\n".parse::<ExponentMatrix>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn canonical_form_of_eq4_is_unchanged() {
        let p = ExponentMatrix::from_rows(41, &[vec![0; 5], vec![0, 1, 5, 7, 26], vec![0, 3, 13, 30, 37]]).unwrap();
        assert!(p.is_canonical());
        assert_eq!(p.canonicalize().unwrap(), p);
    }

    #[test]
    fn row_shift_does_not_change_canonical_form() {
        let p = ExponentMatrix::from_rows(31, &[vec![0; 5], vec![0, 1, 5, 21, 30], vec![0, 3, 13, 6, 20]]).unwrap();
        let mut q = p.clone();
        q.shift_row(2, 17);
        assert_eq!(q.canonicalize().unwrap(), p.canonicalize().unwrap());
    }

    #[test]
    fn canonicalize_rejects_masked_base() {
        let p = ExponentMatrix::new(1, 2, 3, vec![Some(0), None]).unwrap();
        assert_eq!(p.canonicalize().unwrap_err(), Error::NotFullyConnected);
    }
}
