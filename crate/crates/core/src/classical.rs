//! Classical counting facts used as cross-checks: square-free counts `M(t)`,
//! smooth-number counts `Ψ(x, y)`, and the `θ_n` record model whose scaled
//! law also tends to the Dickman-De Bruijn distribution.

use serde::Serialize;

use crate::exec::{Execution, CHUNK};
use crate::primes::PrimeTable;
use crate::rng;
use crate::{Error, Result};

/// Default upper bound for sieves built by the CLI.
pub const DEFAULT_SIEVE_CAP: u64 = 10_000_000;

/// Prefix counts of square-free integers up to a limit.
#[derive(Debug, Clone)]
pub struct SquarefreeSieve {
    limit: u64,
    prefix: Vec<u32>,
}

impl SquarefreeSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 1 {
            return Err(Error::invalid("limit", "must be at least 1"));
        }
        let n = limit as usize;
        let mut squarefree = vec![true; n + 1];
        squarefree[0] = false;
        if n >= 4 {
            let root = (limit as f64).sqrt() as u64 + 1;
            for &p in PrimeTable::sieve(root.max(2))?.primes() {
                let sq = (p * p) as usize;
                if sq > n {
                    break;
                }
                for k in (sq..=n).step_by(sq) {
                    squarefree[k] = false;
                }
            }
        }
        let mut prefix = Vec::with_capacity(n + 1);
        let mut count = 0u32;
        for &flag in &squarefree {
            count += flag as u32;
            prefix.push(count);
        }
        Ok(Self { limit, prefix })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `M(t) = #{n ≤ t : μ(n) ≠ 0}`.
    pub fn count(&self, t: f64) -> Result<u64> {
        if t.is_nan() || t > self.limit as f64 {
            return Err(Error::out_of_range(
                "t",
                format!("{t} exceeds sieve limit {}", self.limit),
            ));
        }
        if t < 1.0 {
            return Ok(0);
        }
        Ok(self.prefix[t.floor() as usize] as u64)
    }
}

/// `M(t)` with a sieve sized to `limit`.
pub fn squarefree_count(limit: u64, t: f64) -> Result<u64> {
    if t.is_nan() || t > limit as f64 {
        return Err(Error::out_of_range(
            "t",
            format!("{t} exceeds sieve limit {limit}"),
        ));
    }
    let floor = t.max(1.0).floor();
    SquarefreeSieve::new(floor as u64)?.count(t.min(floor))
}

/// Largest prime factor of every integer up to a limit.
#[derive(Debug, Clone)]
pub struct SmoothnessSieve {
    limit: u64,
    largest_prime_factor: Vec<u32>,
}

impl SmoothnessSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(
                "limit",
                format!("must be at least 2, got {limit}"),
            ));
        }
        if limit > u32::MAX as u64 {
            return Err(Error::resource(
                "limit",
                format!("{limit} does not fit the u32 factor table"),
            ));
        }
        let n = limit as usize;
        let mut lpf = vec![0u32; n + 1];
        lpf[1] = 1;
        // ascending primes overwrite, leaving the largest
        for &p in PrimeTable::sieve(limit)?.primes() {
            for k in (p as usize..=n).step_by(p as usize) {
                lpf[k] = p as u32;
            }
        }
        Ok(Self {
            limit,
            largest_prime_factor: lpf,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Largest prime factor of `n`, with `lpf(1) = 1`.
    pub fn largest_prime_factor(&self, n: u64) -> Option<u32> {
        (n >= 1 && n <= self.limit).then(|| self.largest_prime_factor[n as usize])
    }

    /// `Ψ(x, y) = #{1 ≤ n ≤ x : lpf(n) ≤ y}`.
    pub fn psi(&self, x: u64, y: u64) -> Result<u64> {
        self.psi_with(x, y, Execution::default())
    }

    pub fn psi_with(&self, x: u64, y: u64, exec: Execution) -> Result<u64> {
        if x > self.limit {
            return Err(Error::out_of_range(
                "x",
                format!("{x} exceeds sieve limit {}", self.limit),
            ));
        }
        let table = &self.largest_prime_factor[1..=x as usize];
        Ok(exec
            .map_chunks(table.len(), CHUNK * 16, |range| {
                table[range].iter().filter(|&&f| f as u64 <= y).count() as u64
            })
            .into_iter()
            .sum())
    }
}

/// `ln 4 · ln x / ln ln x`, the growth of `ln Ψ(x, ln x)`.
pub fn erdos_regime_log(x: f64) -> Result<f64> {
    if !(x >= 16.0) {
        return Err(Error::out_of_range("x", format!("need x >= 16, got {x}")));
    }
    let l = x.ln();
    Ok(4f64.ln() * l / l.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErdosDiagnostic {
    pub x: u64,
    pub y: u64,
    pub psi: u64,
    pub log_psi: f64,
    pub predicted: f64,
    pub ratio: f64,
}

/// `ln Ψ(x, ⌊ln x⌋)` against [`erdos_regime_log`]. Diagnostic only.
pub fn erdos_diagnostic(sieve: &SmoothnessSieve, x: u64) -> Result<ErdosDiagnostic> {
    let predicted = erdos_regime_log(x as f64)?;
    let y = (x as f64).ln().floor() as u64;
    let psi = sieve.psi(x, y)?;
    let log_psi = (psi as f64).ln();
    Ok(ErdosDiagnostic {
        x,
        y,
        psi,
        log_psi,
        predicted,
        ratio: log_psi / predicted,
    })
}

/// Replicates of `θ_n = Σ_{j≤n} η_j` with independent `η_j ∈ {0, j}`,
/// `P{η_j = j} = 1/j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSampleSet {
    pub n: u64,
    pub seed: u64,
    pub samples: Vec<u64>,
}

impl ThetaSampleSet {
    /// `θ_n / n` for every replicate.
    pub fn scaled(&self) -> Vec<f64> {
        self.samples
            .iter()
            .map(|&t| t as f64 / self.n as f64)
            .collect()
    }
}

/// One replicate of `θ_n`.
///
/// Given the last success at `j`, `P{no success in (j, k]} = Π (1 − 1/i) = j/k`,
/// so the next success is at `⌈j/U⌉` for uniform `U ∈ (0, 1)`. A replicate
/// therefore costs about `ln n` draws.
fn draw_theta<R: rand::Rng + ?Sized>(n: u64, rng: &mut R) -> u64 {
    let mut sum = 1u64; // η_1 = 1
    let mut last = 1u64;
    loop {
        let next = (last as f64 / rng::open01(rng)).ceil();
        if next > n as f64 {
            return sum;
        }
        last = (next as u64).max(last + 1);
        sum += last;
    }
}

pub fn sample_theta(n: u64, seed: u64, count: usize) -> Result<ThetaSampleSet> {
    sample_theta_with(n, seed, count, Execution::default())
}

pub fn sample_theta_with(
    n: u64,
    seed: u64,
    count: usize,
    exec: Execution,
) -> Result<ThetaSampleSet> {
    if n == 0 {
        return Err(Error::invalid("n", "must be positive"));
    }
    if count == 0 {
        return Err(Error::invalid("count", "must be positive"));
    }
    let samples = exec
        .map_chunks(count, CHUNK, |range| {
            range
                .map(|i| draw_theta(n, &mut rng::stream(seed, i as u64)))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();
    Ok(ThetaSampleSet { n, seed, samples })
}

/// One-sample Kolmogorov-Smirnov statistic `sup |F_N − F|`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("samples", "empty sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max))
}
