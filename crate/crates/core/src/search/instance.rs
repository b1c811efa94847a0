//! Concrete trapping-set instances in a Tanner graph.

use std::fmt;

use crate::lets::{canonical_certificate, Certificate, NormalGraph, MAX_NODES};
use crate::qc::TannerGraph;

/// A leafless elementary trapping set located in a Tanner graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetsInstance {
    /// Sorted variable indices.
    pub vars: Vec<u32>,
    pub cert: Certificate,
    /// Normal-graph edges as `(var, var, check)`.
    pub edges: Vec<(u32, u32, u32)>,
}

impl LetsInstance {
    /// Re-derives an instance from a variable set, or `None` when the set
    /// is not a connected leafless elementary trapping set.
    pub fn from_vars(t: &TannerGraph, vars: &[u32]) -> Option<LetsInstance> {
        let mut vars = vars.to_vec();
        vars.sort_unstable();
        vars.dedup();
        let ind = induce(t, &vars)?;
        if ind.graph.min_degree() < 2 || !ind.graph.is_connected() {
            return None;
        }
        let edges = ind
            .edges
            .iter()
            .map(|&(i, j, c)| (vars[i as usize], vars[j as usize], c))
            .collect();
        Some(LetsInstance {
            cert: canonical_certificate(&ind.graph),
            vars,
            edges,
        })
    }

    pub fn size(&self) -> usize {
        self.vars.len()
    }

    /// `(a, b)` class given the variable degree.
    pub fn class(&self, dv: usize) -> (usize, usize) {
        let a = self.vars.len();
        (a, a * dv - 2 * self.edges.len())
    }
}

impl fmt::Display for LetsInstance {
    /// `cert vars` with variables comma-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vars.iter().map(u32::to_string).collect();
        write!(f, "{} {}", self.cert, vs.join(","))
    }
}

/// Induced subgraph of a variable set.
pub(crate) struct Induced {
    pub graph: NormalGraph,
    /// `(i, j, check)` with `i < j` indices into the variable list.
    pub edges: Vec<(u8, u8, u32)>,
}

/// Normal graph induced by `vars` (sorted), or `None` if some check meets
/// the set three or more times or two variables share two checks.
pub(crate) fn induce(t: &TannerGraph, vars: &[u32]) -> Option<Induced> {
    if vars.len() > MAX_NODES {
        return None;
    }
    let mut touches: Vec<(u32, u8)> = Vec::with_capacity(vars.len() * 4);
    for (i, &v) in vars.iter().enumerate() {
        touches.extend(t.var_checks(v).iter().map(|&c| (c, i as u8)));
    }
    touches.sort_unstable();
    let mut graph = NormalGraph::empty(vars.len());
    let mut edges = Vec::new();
    let mut k = 0;
    while k < touches.len() {
        let c = touches[k].0;
        let mut e = k;
        while e < touches.len() && touches[e].0 == c {
            e += 1;
        }
        match e - k {
            1 => {}
            2 => {
                let (i, j) = (touches[k].1 as usize, touches[k + 1].1 as usize);
                if graph.has_edge(i, j) {
                    return None;
                }
                graph.add_edge(i, j);
                edges.push((i as u8, j as u8, c));
            }
            _ => return None,
        }
        k = e;
    }
    Some(Induced { graph, edges })
}

/// Compact, ordered key of a sorted variable set of a known size.
pub(crate) trait SetKey: Ord + Clone + Send + Sync {
    fn encode(vars: &[u32], bits: u32) -> Self;
    fn decode(&self, len: usize, bits: u32, out: &mut Vec<u32>);
}

/// Variables packed `bits` apiece into one integer.
impl SetKey for u128 {
    fn encode(vars: &[u32], bits: u32) -> Self {
        vars.iter().fold(0u128, |k, &v| (k << bits) | u128::from(v))
    }

    fn decode(&self, len: usize, bits: u32, out: &mut Vec<u32>) {
        out.clear();
        let mask = (1u128 << bits) - 1;
        for i in (0..len).rev() {
            out.push(((self >> (bits * i as u32)) & mask) as u32);
        }
    }
}

impl SetKey for Box<[u32]> {
    fn encode(vars: &[u32], _: u32) -> Self {
        vars.into()
    }

    fn decode(&self, _: usize, _: u32, out: &mut Vec<u32>) {
        out.clear();
        out.extend_from_slice(self);
    }
}

/// Bit width of variable indices in packed keys.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KeyCodec {
    bits: u32,
}

impl KeyCodec {
    pub fn new(num_vars: usize) -> Self {
        let bits = (usize::BITS - num_vars.max(2).saturating_sub(1).leading_zeros()).max(1);
        KeyCodec { bits }
    }

    /// Whether sets of up to `len` variables fit in a `u128` key.
    pub fn packs(&self, len: usize) -> bool {
        len as u32 * self.bits <= 128
    }

    pub fn encode<K: SetKey>(&self, vars: &[u32]) -> K {
        K::encode(vars, self.bits)
    }

    pub fn decode<K: SetKey>(&self, key: &K, len: usize, out: &mut Vec<u32>) {
        key.decode(len, self.bits, out)
    }
}

/// The image of a variable set under the cyclic shift `t -> t + delta`
/// inside every column block, sorted.
pub fn shift_vars(vars: &[u32], lifting: u32, delta: u32) -> Vec<u32> {
    let n = lifting.max(1);
    let mut out: Vec<u32> = vars.iter().map(|&v| (v / n) * n + (v % n + delta) % n).collect();
    out.sort_unstable();
    out
}

/// Shifts that move a variable of the lowest column block of `vars` to
/// copy index 0. The smallest orbit member is the image under one of them.
fn leading_shifts(vars: &[u32], lifting: u32) -> impl Iterator<Item = u32> + '_ {
    let n = lifting.max(1);
    let j0 = vars.iter().map(|&v| v / n).min().unwrap_or(0);
    vars.iter()
        .filter(move |&&v| v / n == j0)
        .map(move |&v| (n - v % n) % n)
}

/// Lexicographically smallest member of the cyclic-shift orbit of `vars`.
pub fn orbit_representative(vars: &[u32], lifting: u32) -> Vec<u32> {
    leading_shifts(vars, lifting)
        .map(|d| shift_vars(vars, lifting, d))
        .min()
        .unwrap_or_default()
}

/// Number of distinct sets in the cyclic-shift orbit of `vars`.
pub fn orbit_size(vars: &[u32], lifting: u32) -> u64 {
    let n = lifting.max(1);
    let Some(&first) = vars.iter().min() else { return 1 };
    // A stabilizing shift maps `first` onto a variable of the same block.
    let stab = vars
        .iter()
        .filter(|&&v| v / n == first / n)
        .filter(|&&v| shift_vars(vars, n, (v % n + n - first % n) % n) == vars)
        .count() as u64;
    u64::from(n) / stab
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codec_round_trip_and_order() {
        let codec = KeyCodec::new(155);
        let a = [3u32, 40, 154];
        let b = [3u32, 41, 100];
        let mut out = Vec::new();
        let ka: u128 = codec.encode(&a);
        codec.decode(&ka, 3, &mut out);
        assert_eq!(out, a);
        assert!(ka < codec.encode(&b));
        let wide: Vec<u32> = (0..20).collect();
        assert!(!codec.packs(20));
        let kw: Box<[u32]> = codec.encode(&wide);
        codec.decode(&kw, 20, &mut out);
        assert_eq!(out, wide);
    }

    #[test]
    fn orbit_representative_is_shift_invariant() {
        let v = [2u32, 9, 13];
        let rep = orbit_representative(&v, 7);
        assert_eq!(orbit_representative(&shift_vars(&v, 7, 3), 7), rep);
        assert!(rep <= v.to_vec());
        let brute = (0..7).map(|d| shift_vars(&v, 7, d)).min().unwrap();
        assert_eq!(rep, brute);
    }

    #[test]
    fn orbit_size_counts_distinct_shifts() {
        assert_eq!(orbit_size(&[2, 9, 13], 7), 7);
        // Copy indices {0, 2} and {1, 3} in two blocks of 4: shift 2 fixes it.
        assert_eq!(orbit_size(&[0, 2, 5, 7], 4), 2);
        assert_eq!(orbit_size(&[0, 1, 2, 3], 4), 1);
    }
}
