//! Fair-bit sources and seeded, batch-parallel Monte Carlo.
//!
//! Every random decision in the crate is made from fair bits, so event
//! probabilities are exact powers of two. Trials are split into batches of
//! [`BATCH_SIZE`]; batch `b` draws from a ChaCha8 stream seeded with
//! [`stream_seed`]`(seed, b)`. Batches are reduced by integer histogram
//! addition, so results do not depend on the thread count.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const BATCH_SIZE: u64 = 4096;

/// A stream of fair coin flips.
pub trait BitSource {
    fn next_bit(&mut self) -> bool;

    /// Draws up to `k` bits and reports whether all of them were zero
    /// (an event of probability `2^{-k}`).
    fn all_zero(&mut self, k: u32) -> bool {
        (0..k).all(|_| !self.next_bit())
    }

    /// Number of one bits before the first zero: `P(g = i) = 2^{-(i+1)}`.
    fn geometric(&mut self) -> u32 {
        let mut g = 0;
        while self.next_bit() {
            g += 1;
        }
        g
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of the stream used by batch `batch` of a run seeded with `seed`:
/// `splitmix64(seed ^ splitmix64(batch))`.
pub fn stream_seed(seed: u64, batch: u64) -> u64 {
    splitmix64(seed ^ splitmix64(batch))
}

/// Buffered fair bits from ChaCha8.
pub struct RandomBits {
    rng: ChaCha8Rng,
    buf: u64,
    left: u32,
}

impl RandomBits {
    pub fn new(seed: u64) -> Self {
        RandomBits {
            rng: ChaCha8Rng::seed_from_u64(seed),
            buf: 0,
            left: 0,
        }
    }

    fn refill(&mut self) {
        self.buf = self.rng.next_u64();
        self.left = 64;
    }
}

impl BitSource for RandomBits {
    fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.refill();
        }
        let b = self.buf & 1 == 1;
        self.buf >>= 1;
        self.left -= 1;
        b
    }

    fn all_zero(&mut self, mut k: u32) -> bool {
        while k > 0 {
            if self.left == 0 {
                self.refill();
            }
            let take = k.min(self.left);
            let mask = if take == 64 { u64::MAX } else { (1u64 << take) - 1 };
            let chunk = self.buf & mask;
            self.buf = if take == 64 { 0 } else { self.buf >> take };
            self.left -= take;
            k -= take;
            if chunk != 0 {
                return false;
            }
        }
        true
    }

    fn geometric(&mut self) -> u32 {
        let mut g = 0;
        loop {
            if self.left == 0 {
                self.refill();
            }
            let ones = self.buf.trailing_ones().min(self.left);
            g += ones;
            if ones < self.left {
                // consume the ones and the terminating zero
                let used = ones + 1;
                self.buf = if used == 64 { 0 } else { self.buf >> used };
                self.left -= used;
                return g;
            }
            self.left = 0;
        }
    }
}

/// Replays a fixed bit sequence; panics when exhausted.
#[derive(Clone, Debug)]
pub struct ScriptedBits {
    bits: Vec<bool>,
    pos: usize,
}

impl ScriptedBits {
    pub fn new(bits: &[u8]) -> Self {
        ScriptedBits {
            bits: bits.iter().map(|&b| b != 0).collect(),
            pos: 0,
        }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl BitSource for ScriptedBits {
    fn next_bit(&mut self) -> bool {
        let b = self.bits[self.pos];
        self.pos += 1;
        b
    }
}

/// Integer-valued empirical distribution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    counts: BTreeMap<u64, u64>,
    trials: u64,
}

impl Histogram {
    pub fn record(&mut self, value: u64) {
        *self.counts.entry(value).or_insert(0) += 1;
        self.trials += 1;
    }

    pub fn merge(mut self, other: Histogram) -> Histogram {
        for (v, c) in other.counts {
            *self.counts.entry(v).or_insert(0) += c;
        }
        self.trials += other.trials;
        self
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn frequency(&self, value: u64) -> f64 {
        self.count(value) as f64 / self.trials as f64
    }

    /// Empirical `P(X >= value)`.
    pub fn tail(&self, value: u64) -> f64 {
        let c: u64 = self.counts.range(value..).map(|(_, c)| c).sum();
        c as f64 / self.trials as f64
    }

    pub fn mean(&self) -> f64 {
        let s: f64 = self.counts.iter().map(|(v, c)| *v as f64 * *c as f64).sum();
        s / self.trials as f64
    }
}

/// Runs `trials` independent trials of `trial` in parallel batches.
pub fn run_trials<F>(trials: u64, seed: u64, trial: F) -> Histogram
where
    F: Fn(&mut RandomBits) -> u64 + Sync,
{
    let batches = trials.div_ceil(BATCH_SIZE);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut bits = RandomBits::new(stream_seed(seed, b));
            let n = BATCH_SIZE.min(trials - b * BATCH_SIZE);
            let mut h = Histogram::default();
            for _ in 0..n {
                h.record(trial(&mut bits));
            }
            h
        })
        .reduce(Histogram::default, Histogram::merge)
}

/// Number of standard deviations separating an observed frequency from `p`
/// over `trials` Bernoulli trials.
pub fn binomial_z_score(observed: f64, p: f64, trials: u64) -> f64 {
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    if sigma == 0.0 {
        if (observed - p).abs() == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (observed - p).abs() / sigma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_and_all_zero_frequencies() {
        let mut bits = RandomBits::new(7);
        let n = 200_000;
        let mut zero = 0;
        let mut g_hist = [0u32; 4];
        for _ in 0..n {
            if bits.all_zero(2) {
                zero += 1;
            }
            let g = bits.geometric() as usize;
            if g < 4 {
                g_hist[g] += 1;
            }
        }
        assert!(binomial_z_score(zero as f64 / n as f64, 0.25, n) < 5.0);
        for (i, &c) in g_hist.iter().enumerate() {
            let p = 0.5f64.powi(i as i32 + 1);
            assert!(binomial_z_score(c as f64 / n as f64, p, n) < 5.0);
        }
    }

    #[test]
    fn long_all_zero_runs_cross_word_boundaries() {
        let mut bits = RandomBits::new(3);
        for _ in 0..10 {
            // probability 2^-100: never happens
            assert!(!bits.all_zero(100));
        }
    }

    #[test]
    fn trials_are_independent_of_thread_count() {
        let run = || run_trials(10_000, 42, |b| b.geometric() as u64);
        let a = run();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(run);
        assert_eq!(a, b);
        assert_eq!(a.trials(), 10_000);
    }

    #[test]
    fn scripted_bits_replay() {
        let mut s = ScriptedBits::new(&[1, 1, 0, 0]);
        assert_eq!(s.geometric(), 2);
        assert!(!s.next_bit());
        assert_eq!(s.consumed(), 4);
    }
}
