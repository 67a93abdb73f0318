//! The weighted square-free ensemble `Ω_m`.
//!
//! Elements are `n = Π_{j≤m} p_j^{ν_j}` with `ν_j ∈ {0, 1}` and probability
//! `π_m(n) = 1/(Z_m n)`. The `ν_j` are independent with
//! `P{ν_j = 1} = 1/(1 + p_j)`, and `Z_m = Π_j (1 + 1/p_j)`.
//!
//! Sizes are handled as `ln n` throughout; `n` itself overflows any machine
//! integer long before the enumeration limit.

mod half_table;

pub use half_table::{HalfProductTable, HalfSide, DEFAULT_EXACT_CAP};

use crate::dickman::{EULER_GAMMA, ZETA2};
use crate::exec::{Execution, CHUNK};
use crate::primes::PrimeTable;
use crate::rng;
use crate::summation::CompensatedSum;
use crate::{Error, Result};

/// `e^γ / ζ(2)`, the limit of `Z_m / ln p_m`.
pub fn zm_limit_ratio() -> f64 {
    EULER_GAMMA.exp() / ZETA2
}

/// The ensemble `Ω_m` with its marginals and partition function.
#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    m: usize,
    primes: Vec<u64>,
    log_primes: Vec<f64>,
    inclusion_probs: Vec<f64>,
    /// `hazard[k] = Σ_{j≤k} ln(1 + 1/p_j)`, so `hazard[m] = ln Z_m`.
    hazard: Vec<f64>,
}

impl EnsembleSpec {
    pub fn build(table: &PrimeTable, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m", "must be positive"));
        }
        if m > table.len() {
            return Err(Error::out_of_range(
                "m",
                format!(
                    "only {} primes available below {}",
                    table.len(),
                    table.limit()
                ),
            ));
        }
        let primes = table.primes()[..m].to_vec();
        let log_primes = primes.iter().map(|&p| (p as f64).ln()).collect();
        let inclusion_probs = primes.iter().map(|&p| 1.0 / (1.0 + p as f64)).collect();
        let mut hazard = Vec::with_capacity(m + 1);
        let mut acc = CompensatedSum::new();
        hazard.push(0.0);
        for &p in &primes {
            acc.add((1.0 / p as f64).ln_1p());
            hazard.push(acc.value());
        }
        Ok(Self {
            m,
            primes,
            log_primes,
            inclusion_probs,
            hazard,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn largest_prime(&self) -> u64 {
        self.primes[self.m - 1]
    }

    pub fn log_primes(&self) -> &[f64] {
        &self.log_primes
    }

    /// `ln p_m`.
    pub fn log_largest(&self) -> f64 {
        self.log_primes[self.m - 1]
    }

    pub fn inclusion_probs(&self) -> &[f64] {
        &self.inclusion_probs
    }

    /// `ln Z_m`.
    pub fn log_z(&self) -> f64 {
        self.hazard[self.m]
    }

    /// `(P{ν_j = 0}, P{ν_j = 1}) = (p_j/(1+p_j), 1/(1+p_j))` for 1-based `j`.
    pub fn marginal(&self, j: usize) -> Result<(f64, f64)> {
        if j == 0 || j > self.m {
            return Err(Error::out_of_range(
                "j",
                format!("need 1 <= j <= {}, got {j}", self.m),
            ));
        }
        let p = self.primes[j - 1] as f64;
        Ok((p / (1.0 + p), 1.0 / (1.0 + p)))
    }

    /// `Z_m / ln p_m`, which tends to `e^γ/ζ(2) ≈ 1.082762`.
    pub fn zm_asymptotic_ratio(&self) -> f64 {
        self.log_z().exp() / self.log_largest()
    }

    /// Maximum of `ζ_m`, reached at `n = p_1 ⋯ p_m`.
    pub fn max_zeta(&self) -> f64 {
        self.log_primes.iter().sum::<f64>() / self.log_largest()
    }

    /// 0-based indices `j` with `ν_j = 1` for one draw.
    ///
    /// Rather than flipping `m` coins, the sampler jumps straight to the next
    /// index with `ν_j = 1`: starting after index `i`, the first success is
    /// the least `k` with `hazard[k] − hazard[i] ≥ E` for a standard
    /// exponential `E`, because `P{no success in (i, k]} = e^{−(hazard[k] −
    /// hazard[i])}`. A draw costs `O(ln ln p_m · ln m)`.
    fn draw_ones<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut ones = Vec::new();
        let mut passed = 0usize;
        loop {
            let target = self.hazard[passed] + rng::exp1(rng);
            let k = self.hazard.partition_point(|&c| c < target);
            if k > self.m {
                return ones;
            }
            ones.push(k - 1);
            passed = k;
        }
    }

    /// `count` independent draws of `ν`; draw `i` uses random stream `i`.
    pub fn sample_nu(&self, seed: u64, count: usize) -> Vec<NuVector> {
        Execution::default()
            .map_chunks(count, CHUNK, |range| {
                range
                    .map(|i| {
                        let ones = self.draw_ones(&mut rng::stream(seed, i as u64));
                        NuVector::from_ones(self, ones)
                    })
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect()
    }

    /// `ζ_m` for `count` independent draws, without materialising `ν`.
    pub fn sample_zeta(&self, seed: u64, count: usize) -> Vec<f64> {
        self.sample_zeta_with(seed, count, Execution::default())
    }

    pub fn sample_zeta_with(&self, seed: u64, count: usize, exec: Execution) -> Vec<f64> {
        let scale = 1.0 / self.log_largest();
        exec.map_chunks(count, CHUNK, |range| {
            range
                .map(|i| {
                    let ones = self.draw_ones(&mut rng::stream(seed, i as u64));
                    ones.iter().map(|&j| self.log_primes[j]).sum::<f64>() * scale
                })
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
    }
}

/// One element of `Ω_m`, stored sparsely as the set of `j` with `ν_j = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuVector {
    m: usize,
    ones: Vec<usize>,
    log_n: f64,
}

impl NuVector {
    fn from_ones(spec: &EnsembleSpec, ones: Vec<usize>) -> Self {
        let log_n = ones.iter().map(|&j| spec.log_primes[j]).sum();
        Self {
            m: spec.m,
            ones,
            log_n,
        }
    }

    pub fn from_bits(spec: &EnsembleSpec, bits: &[bool]) -> Result<Self> {
        if bits.len() != spec.m {
            return Err(Error::invalid(
                "nu",
                format!("length {} does not match m = {}", bits.len(), spec.m),
            ));
        }
        let ones = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| j)
            .collect();
        Ok(Self::from_ones(spec, ones))
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// 0-based indices with `ν_j = 1`, ascending.
    pub fn ones(&self) -> &[usize] {
        &self.ones
    }

    pub fn bits(&self) -> Vec<bool> {
        let mut bits = vec![false; self.m];
        for &j in &self.ones {
            bits[j] = true;
        }
        bits
    }

    /// `ln n = Σ ν_j ln p_j`.
    pub fn log_n(&self) -> f64 {
        self.log_n
    }
}

/// `ζ_m = ln n / ln p_m`.
pub fn zeta_statistic(nu: &NuVector, spec: &EnsembleSpec) -> Result<f64> {
    if nu.m != spec.m {
        return Err(Error::invalid(
            "nu",
            format!("length {} does not match m = {}", nu.m, spec.m),
        ));
    }
    Ok(nu.log_n / spec.log_largest())
}

/// Fraction of samples `<= s`.
pub fn empirical_cdf(samples: &[f64], s: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("samples", "empty sample"));
    }
    Ok(samples.iter().filter(|&&z| z <= s).count() as f64 / samples.len() as f64)
}
