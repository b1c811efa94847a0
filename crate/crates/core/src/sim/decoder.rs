//! Quantized min-sum decoding.

use crate::qc::TannerGraph;

/// Decoder parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub bits: u32,
    /// Magnitude at which channel values and messages are clipped.
    pub clip: f64,
    pub max_iters: usize,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            bits: 5,
            clip: 2.0,
            max_iters: 100,
        }
    }
}

/// Uniform mid-tread quantizer with `2^bits - 1` levels over
/// `[-clip, clip]`: level `k` stands for `k * step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantizer {
    pub step: f64,
    pub max_level: i32,
}

impl Quantizer {
    pub fn new(cfg: &DecoderConfig) -> Self {
        assert!(
            cfg.bits >= 2 && cfg.clip > 0.0,
            "need at least 2 bits and a positive clip"
        );
        let levels = (1i64 << cfg.bits) - 1;
        Quantizer {
            step: 2.0 * cfg.clip / levels as f64,
            max_level: ((levels - 1) / 2) as i32,
        }
    }

    pub fn level(&self, x: f64) -> i32 {
        let k = (x / self.step).round();
        k.clamp(-f64::from(self.max_level), f64::from(self.max_level)) as i32
    }

    pub fn value(&self, level: i32) -> f64 {
        f64::from(level) * self.step
    }

    fn saturate(&self, k: i32) -> i32 {
        k.clamp(-self.max_level, self.max_level)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub bits: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

/// Flooding min-sum decoder over a fixed Tanner graph. Messages are
/// integer quantizer levels.
#[derive(Debug, Clone)]
pub struct MinSumDecoder {
    quant: Quantizer,
    max_iters: usize,
    /// Edges grouped by check; `edge_var[e]` is the variable of edge `e`.
    check_start: Vec<usize>,
    edge_var: Vec<u32>,
    /// Edge ids grouped by variable.
    var_start: Vec<usize>,
    var_edges: Vec<u32>,
    v2c: Vec<i32>,
    c2v: Vec<i32>,
    channel: Vec<i32>,
}

impl MinSumDecoder {
    pub fn new(t: &TannerGraph, cfg: &DecoderConfig) -> Self {
        let mut check_start = Vec::with_capacity(t.num_checks() + 1);
        let mut edge_var = Vec::with_capacity(t.num_edges());
        for c in 0..t.num_checks() as u32 {
            check_start.push(edge_var.len());
            edge_var.extend_from_slice(t.check_vars(c));
        }
        check_start.push(edge_var.len());
        let mut per_var: Vec<Vec<u32>> = vec![Vec::new(); t.num_vars()];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v as usize].push(e as u32);
        }
        let mut var_start = Vec::with_capacity(t.num_vars() + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        for list in &per_var {
            var_start.push(var_edges.len());
            var_edges.extend_from_slice(list);
        }
        var_start.push(var_edges.len());
        let ne = edge_var.len();
        MinSumDecoder {
            quant: Quantizer::new(cfg),
            max_iters: cfg.max_iters,
            check_start,
            edge_var,
            var_start,
            var_edges,
            v2c: vec![0; ne],
            c2v: vec![0; ne],
            channel: vec![0; t.num_vars()],
        }
    }

    pub fn quantizer(&self) -> Quantizer {
        self.quant
    }

    /// Decodes channel values (positive favours bit 0).
    pub fn decode(&mut self, channel: &[f64]) -> DecodeOutcome {
        let nv = self.var_start.len() - 1;
        assert_eq!(channel.len(), nv, "one channel value per variable");
        for (q, &y) in self.channel.iter_mut().zip(channel) {
            *q = self.quant.level(y);
        }
        self.c2v.iter_mut().for_each(|m| *m = 0);
        let mut bits = vec![0u8; nv];
        for it in 0..=self.max_iters {
            // variable update and hard decision
            for v in 0..nv {
                let edges = &self.var_edges[self.var_start[v]..self.var_start[v + 1]];
                let total: i32 = self.channel[v] + edges.iter().map(|&e| self.c2v[e as usize]).sum::<i32>();
                bits[v] = u8::from(total < 0);
                for &e in edges {
                    self.v2c[e as usize] = self.quant.saturate(total - self.c2v[e as usize]);
                }
            }
            if self.syndrome_ok(&bits) {
                return DecodeOutcome {
                    bits,
                    converged: true,
                    iterations: it,
                };
            }
            if it == self.max_iters {
                break;
            }
            self.check_update();
        }
        DecodeOutcome {
            bits,
            converged: false,
            iterations: self.max_iters,
        }
    }

    fn check_update(&mut self) {
        for c in 0..self.check_start.len() - 1 {
            let range = self.check_start[c]..self.check_start[c + 1];
            let mut sign = 1i32;
            let (mut min1, mut min2, mut arg) = (i32::MAX, i32::MAX, usize::MAX);
            for e in range.clone() {
                let m = self.v2c[e];
                if m < 0 {
                    sign = -sign;
                }
                let a = m.abs();
                if a < min1 {
                    min2 = min1;
                    min1 = a;
                    arg = e;
                } else if a < min2 {
                    min2 = a;
                }
            }
            for e in range {
                let mag = if e == arg { min2 } else { min1 };
                let s = if self.v2c[e] < 0 { -sign } else { sign };
                self.c2v[e] = s * mag.min(self.quant.max_level);
            }
        }
    }

    fn syndrome_ok(&self, bits: &[u8]) -> bool {
        (0..self.check_start.len() - 1).all(|c| {
            self.edge_var[self.check_start[c]..self.check_start[c + 1]]
                .iter()
                .fold(0u8, |acc, &v| acc ^ bits[v as usize])
                == 0
        })
    }
}
