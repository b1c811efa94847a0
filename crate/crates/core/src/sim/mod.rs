//! BPSK/AWGN Monte-Carlo frame-error-rate estimation with a quantized
//! min-sum decoder.

pub mod decoder;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qc::TannerGraph;

pub use decoder::{DecodeOutcome, DecoderConfig, MinSumDecoder, Quantizer};

/// When to stop collecting frames at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_errors: 100,
            max_frames: 10_000_000,
        }
    }
}

/// Frames are simulated in fixed batches so the totals do not depend on
/// the number of worker threads.
const BATCH: u64 = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub ebn0_db: f64,
    pub frames: u64,
    pub errors: u64,
    pub fer: f64,
    /// Failed frames whose error support has at most `a_cap` variables,
    /// by `(a, b)` with `b` the number of odd-degree checks.
    pub failures: BTreeMap<(usize, usize), u64>,
    /// Failed frames with a larger error support.
    pub unclassified: u64,
}

impl SimResult {
    pub fn reached(&self, stop: &StopRule) -> bool {
        self.errors >= stop.min_errors
    }
}

/// `(a, b)` of a set of variables: its size and the number of checks it
/// touches an odd number of times.
pub fn support_class(t: &TannerGraph, support: &[u32]) -> (usize, usize) {
    let mut hits: BTreeMap<u32, usize> = BTreeMap::new();
    for &v in support {
        for &c in t.var_checks(v) {
            *hits.entry(c).or_insert(0) += 1;
        }
    }
    (support.len(), hits.values().filter(|&&h| h % 2 == 1).count())
}

/// Noise standard deviation for BPSK at `ebn0_db` and code rate `rate`.
pub fn noise_sigma(ebn0_db: f64, rate: f64) -> f64 {
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    (1.0 / (2.0 * rate * ebn0)).sqrt()
}

/// Estimates the frame error rate at one SNR point by transmitting the
/// all-zero codeword. Frame `i` draws its noise from stream `i` of the
/// seeded generator.
pub fn fer_point(
    t: &TannerGraph,
    ebn0_db: f64,
    stop: &StopRule,
    cfg: &DecoderConfig,
    seed: u64,
    a_cap: usize,
) -> Result<SimResult> {
    if t.num_vars() == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    let rate = t.dimension() as f64 / t.num_vars() as f64;
    if rate <= 0.0 {
        return Err(Error::InvalidArgument("code has dimension zero".into()));
    }
    let sigma = noise_sigma(ebn0_db, rate);
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let proto = MinSumDecoder::new(t, cfg);
    let mut res = SimResult {
        ebn0_db,
        frames: 0,
        errors: 0,
        fer: 0.0,
        failures: BTreeMap::new(),
        unclassified: 0,
    };
    while res.errors < stop.min_errors && res.frames < stop.max_frames {
        let batch = BATCH.min(stop.max_frames - res.frames);
        let first = res.frames;
        let failed: Vec<Vec<u32>> = (first..first + batch)
            .into_par_iter()
            .map_init(
                || (proto.clone(), vec![0.0; t.num_vars()]),
                |(dec, y), i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i);
                    for s in y.iter_mut() {
                        *s = 1.0 + normal.sample(&mut rng);
                    }
                    let out = dec.decode(y);
                    if out.converged && out.bits.iter().all(|&b| b == 0) {
                        None
                    } else {
                        Some(
                            out.bits
                                .iter()
                                .enumerate()
                                .filter(|(_, &b)| b == 1)
                                .map(|(v, _)| v as u32)
                                .collect(),
                        )
                    }
                },
            )
            .flatten()
            .collect();
        res.frames += batch;
        res.errors += failed.len() as u64;
        for support in failed {
            if !support.is_empty() && support.len() <= a_cap {
                *res.failures.entry(support_class(t, &support)).or_insert(0) += 1;
            } else {
                res.unclassified += 1;
            }
        }
    }
    res.fer = res.errors as f64 / res.frames as f64;
    Ok(res)
}

/// `ebn0_db,frames,errors,fer` with a header.
pub fn results_csv(results: &[SimResult]) -> String {
    let mut s = String::from("ebn0_db,frames,errors,fer\n");
    for r in results {
        let _ = writeln!(s, "{},{},{},{:e}", r.ebn0_db, r.frames, r.errors, r.fer);
    }
    s
}

/// Failure classes summed over all points, as `a,b,count`.
pub fn failures_csv(results: &[SimResult]) -> String {
    let mut total: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for r in results {
        for (&k, &c) in &r.failures {
            *total.entry(k).or_insert(0) += c;
        }
    }
    let mut s = String::from("a,b,count\n");
    for ((a, b), c) in total {
        let _ = writeln!(s, "{a},{b},{c}");
    }
    s
}
