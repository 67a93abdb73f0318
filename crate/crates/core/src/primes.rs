//! Prime tables, the counting function `N(t)` and Mertens products.

use crate::exec::Execution;
use crate::summation::CompensatedSum;
use crate::{Error, Result};

/// Bounds at or above this value are sieved segment by segment.
pub const SEGMENTED_THRESHOLD: u64 = 10_000_000;

/// Numbers covered by one segment of the segmented sieve.
const SEGMENT_SPAN: u64 = 1 << 19;

/// All primes up to a bound, in ascending order. Immutable once built.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn sieve(limit: u64) -> Result<Self> {
        Self::sieve_with(limit, Execution::default())
    }

    pub fn sieve_with(limit: u64, exec: Execution) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(
                "limit",
                format!("must be at least 2, got {limit}"),
            ));
        }
        let primes = if limit < SEGMENTED_THRESHOLD {
            flat_sieve(limit)
        } else {
            segmented_sieve(limit, exec)
        };
        Ok(Self { limit, primes })
    }

    /// Smallest table holding at least `m` primes.
    pub fn with_at_least(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m", "must be positive"));
        }
        // p_m < m (ln m + ln ln m) for m >= 6.
        let mf = m.max(6) as f64;
        let bound = (mf * (mf.ln() + mf.ln().ln())).ceil() as u64 + 16;
        Self::sieve(bound)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `p_m`, 1-indexed.
    pub fn nth_prime(&self, m: usize) -> Result<u64> {
        if m == 0 || m > self.primes.len() {
            return Err(Error::out_of_range(
                "m",
                format!("table holds {} primes, asked for p_{m}", self.primes.len()),
            ));
        }
        Ok(self.primes[m - 1])
    }

    /// `N(t)`, the number of primes `<= t`.
    pub fn prime_count(&self, t: f64) -> Result<usize> {
        if t.is_nan() || t > self.limit as f64 {
            return Err(Error::out_of_range(
                "t",
                format!("{t} exceeds the sieve limit {}", self.limit),
            ));
        }
        if t < 2.0 {
            return Ok(0);
        }
        let floor = t.floor() as u64;
        Ok(self.primes.partition_point(|&p| p <= floor))
    }

    /// `ln x · Π_{p ≤ x} (1 − 1/p)`, which tends to `e^{−γ}`.
    pub fn mertens_product(&self, x: f64) -> Result<f64> {
        if !(2.0..=self.limit as f64).contains(&x) {
            return Err(Error::out_of_range(
                "x",
                format!("{x} outside [2, {}]", self.limit),
            ));
        }
        let log_product: CompensatedSum = self
            .primes
            .iter()
            .take_while(|&&p| p as f64 <= x)
            .map(|&p| (-1.0 / p as f64).ln_1p())
            .sum();
        Ok(x.ln() * log_product.value().exp())
    }
}

/// Odd-only bit sieve.
fn flat_sieve(limit: u64) -> Vec<u64> {
    // bit i stands for 2i + 1
    let odd_count = (limit as usize).div_ceil(2);
    let mut composite = vec![0u64; odd_count.div_ceil(64)];
    let mut i = 1usize;
    loop {
        let p = 2 * i + 1;
        if p * p > limit as usize {
            break;
        }
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            let mut j = (p * p) / 2;
            while j < odd_count {
                composite[j / 64] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_count(limit));
    primes.push(2);
    primes.extend(
        (1..odd_count)
            .filter(|&i| composite[i / 64] >> (i % 64) & 1 == 0)
            .map(|i| 2 * i as u64 + 1),
    );
    primes
}

fn segmented_sieve(limit: u64, exec: Execution) -> Vec<u64> {
    let root = (limit as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = flat_sieve(root.max(2));
    let base_odd = &base[1..];
    let segments = (limit / SEGMENT_SPAN + 1) as usize;
    let parts = exec.map_chunks(segments, 1, |range| {
        let lo = range.start as u64 * SEGMENT_SPAN;
        let hi = (lo + SEGMENT_SPAN).min(limit + 1);
        sieve_segment(lo, hi, base_odd)
    });
    let mut primes = Vec::with_capacity(estimate_count(limit));
    primes.push(2);
    for part in parts {
        primes.extend(part);
    }
    primes
}

/// Odd primes in `[lo, hi)`.
fn sieve_segment(lo: u64, hi: u64, base_odd: &[u64]) -> Vec<u64> {
    // index i stands for first + 2i
    let first = if lo <= 3 { 3 } else { lo | 1 };
    if first >= hi {
        return Vec::new();
    }
    let len = ((hi - first) as usize).div_ceil(2);
    let mut composite = vec![false; len];
    for &p in base_odd {
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(first.div_ceil(p) * p);
        if start % 2 == 0 {
            start += p;
        }
        let mut j = ((start - first) / 2) as usize;
        while j < len {
            composite[j] = true;
            j += p as usize;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| first + 2 * i as u64)
        .collect()
}

fn estimate_count(limit: u64) -> usize {
    let x = limit.max(3) as f64;
    (1.26 * x / x.ln()) as usize + 8
}
