//! Target regions: unions of `a <= A, b <= B` rectangles.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub a_max: usize,
    pub b_max: usize,
}

/// Union of rectangles in the `(a, b)` plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TargetRange {
    rects: Vec<Rect>,
}

impl TargetRange {
    pub fn new(rects: Vec<Rect>) -> Self {
        let mut rects = rects;
        rects.sort();
        rects.dedup();
        TargetRange { rects }
    }

    pub fn rect(a_max: usize, b_max: usize) -> Self {
        TargetRange::new(vec![Rect { a_max, b_max }])
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rects.iter().any(|r| a <= r.a_max && b <= r.b_max)
    }

    pub fn a_max(&self) -> usize {
        self.rects.iter().map(|r| r.a_max).max().unwrap_or(0)
    }

    pub fn b_max(&self) -> usize {
        self.rects.iter().map(|r| r.b_max).max().unwrap_or(0)
    }

    /// Whether a structure of class `(a, b)` could still grow into the
    /// region. Each added node lowers `b` by at most `dv`.
    pub fn may_reach(&self, a: usize, b: usize, dv: usize) -> bool {
        self.rects
            .iter()
            .any(|r| a <= r.a_max && b <= r.b_max + dv * (r.a_max - a))
    }
}

impl fmt::Display for TargetRange {
    /// `a<=10,b<=3;a<=12,b<=2`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .rects
            .iter()
            .map(|r| format!("a<={},b<={}", r.a_max, r.b_max))
            .collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for TargetRange {
    type Err = Error;

    /// Accepts `a<=10,b<=3;a<=12,b<=2` or the shorthand `10:3;12:2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |t: &str| Error::InvalidArgument(format!("bad range `{t}`"));
        let mut rects = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (x, y) = part
                .split_once(',')
                .or_else(|| part.split_once(':'))
                .ok_or_else(|| bad(part))?;
            let num = |t: &str, key: &str| {
                t.trim()
                    .trim_start_matches(key)
                    .trim_start_matches("<=")
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| bad(part))
            };
            rects.push(Rect {
                a_max: num(x, "a")?,
                b_max: num(y, "b")?,
            });
        }
        if rects.is_empty() {
            return Err(bad(s));
        }
        Ok(TargetRange::new(rects))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_membership_and_parse() {
        let r: TargetRange = "a<=8,b<=3;a<=10,b<=2".parse().unwrap();
        assert!(r.contains(8, 3));
        assert!(r.contains(10, 2));
        assert!(!r.contains(9, 3));
        assert_eq!(r.to_string().parse::<TargetRange>().unwrap(), r);
        assert_eq!("12:3".parse::<TargetRange>().unwrap(), TargetRange::rect(12, 3));
    }

    #[test]
    fn reachability_bound() {
        let r = TargetRange::rect(12, 3);
        assert!(r.may_reach(11, 6, 3));
        assert!(!r.may_reach(11, 7, 3));
        assert!(!r.may_reach(13, 0, 3));
    }
}
