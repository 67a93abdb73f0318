//! Exact `Π_m` masses by meet-in-the-middle enumeration.
//!
//! The first `⌊m/2⌋` primes form the left half and the rest the right half.
//! Each half lists all `2^{size}` subset products as sorted `ln` values with
//! prefix sums of the weights `1/n`. Every `n ∈ Ω_m` is a unique product of
//! one left and one right entry, so
//! `Σ_{ln n ≤ x} 1/n = Σ_left w_l · W_right(x − ln l)`, which a two-pointer
//! sweep evaluates in linear time.
//!
//! Intervals are half-open `(a, b]` in `ζ` units. An atom exactly on a
//! boundary (e.g. `n = p_m` at `ζ = 1`) belongs to the cell below it, so a
//! partition into cells tiles without double counting.

use super::EnsembleSpec;
use crate::exec::{Execution, CHUNK};
use crate::summation::CompensatedSum;
use crate::{Error, Result};

/// Largest `m` enumerated by default (two tables of `2^20` entries).
pub const DEFAULT_EXACT_CAP: usize = 40;

/// Absolute cap accepted by [`HalfProductTable::build_capped`].
const HARD_CAP: usize = 48;

/// Relative slack when comparing a sum of logs against a cut. Covers the
/// rounding of the left+right decomposition for atoms that sit exactly on a
/// boundary such as `ln p_m`.
const LOG_SLACK: f64 = 1e-12;

fn cut(bound: f64) -> f64 {
    if bound.is_finite() {
        bound + LOG_SLACK * bound.abs().max(1.0)
    } else {
        bound
    }
}

/// One half: sorted subset log-products with prefix weight sums.
#[derive(Debug, Clone)]
pub struct HalfSide {
    logs: Vec<f64>,
    /// `prefix_weight[i] = Σ_{k<i} e^{−logs[k]}`.
    prefix_weight: Vec<f64>,
}

impl HalfSide {
    fn enumerate(log_primes: &[f64], exec: Execution) -> Self {
        let mut logs = Vec::with_capacity(1 << log_primes.len());
        logs.push(0.0);
        for &lp in log_primes {
            let len = logs.len();
            for i in 0..len {
                logs.push(logs[i] + lp);
            }
        }
        exec.sort_by_f64(&mut logs, |&x| x);
        let mut prefix_weight = Vec::with_capacity(logs.len() + 1);
        let mut acc = CompensatedSum::new();
        prefix_weight.push(0.0);
        for &l in &logs {
            acc.add((-l).exp());
            prefix_weight.push(acc.value());
        }
        Self {
            logs,
            prefix_weight,
        }
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    /// Subset log-products, ascending.
    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn weight(&self, i: usize) -> f64 {
        (-self.logs[i]).exp()
    }

    pub fn total_weight(&self) -> f64 {
        self.prefix_weight[self.logs.len()]
    }

    /// Number of entries with log `<= x`.
    fn rank(&self, x: f64) -> usize {
        self.logs.partition_point(|&l| l <= x)
    }
}

/// Both halves of `Ω_m` plus the normalisation of the ensemble.
#[derive(Debug, Clone)]
pub struct HalfProductTable {
    split_index: usize,
    left: HalfSide,
    right: HalfSide,
    log_largest: f64,
    log_z: f64,
    exec: Execution,
}

impl HalfProductTable {
    pub fn build(spec: &EnsembleSpec) -> Result<Self> {
        Self::build_capped(spec, DEFAULT_EXACT_CAP, Execution::default())
    }

    pub fn build_with(spec: &EnsembleSpec, exec: Execution) -> Result<Self> {
        Self::build_capped(spec, DEFAULT_EXACT_CAP, exec)
    }

    /// Build with an explicit enumeration cap (at most 48).
    pub fn build_capped(spec: &EnsembleSpec, cap: usize, exec: Execution) -> Result<Self> {
        let m = spec.m();
        if cap > HARD_CAP {
            return Err(Error::resource(
                "cap",
                format!("cap {cap} above hard limit {HARD_CAP}"),
            ));
        }
        if m > cap {
            return Err(Error::resource(
                "m",
                format!("exact enumeration limited to m <= {cap}, got {m}"),
            ));
        }
        let split_index = m / 2;
        let (left_logs, right_logs) = spec.log_primes().split_at(split_index);
        Ok(Self {
            split_index,
            left: HalfSide::enumerate(left_logs, exec),
            right: HalfSide::enumerate(right_logs, exec),
            log_largest: spec.log_largest(),
            log_z: spec.log_z(),
            exec,
        })
    }

    /// Number of primes in the left half.
    pub fn split_index(&self) -> usize {
        self.split_index
    }

    pub fn left(&self) -> &HalfSide {
        &self.left
    }

    pub fn right(&self) -> &HalfSide {
        &self.right
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// `Σ_{n ∈ Ω_m, lo < ln n ≤ hi} 1/n` for log-space cuts (already slackened).
    fn weight_between(&self, lo: f64, hi: f64) -> f64 {
        let left = &self.left;
        let right = &self.right;
        let parts = self.exec.map_chunks(left.len(), CHUNK, |range| {
            let first = left.logs[range.start];
            let mut upper = right.rank(hi - first);
            let mut lower = right.rank(lo - first);
            let mut acc = CompensatedSum::new();
            for i in range {
                let l = left.logs[i];
                while upper > 0 && right.logs[upper - 1] > hi - l {
                    upper -= 1;
                }
                if upper == 0 {
                    break;
                }
                while lower > 0 && right.logs[lower - 1] > lo - l {
                    lower -= 1;
                }
                if upper > lower {
                    acc.add(
                        left.weight(i) * (right.prefix_weight[upper] - right.prefix_weight[lower]),
                    );
                }
            }
            acc
        });
        parts.into_iter().sum::<CompensatedSum>().value()
    }

    /// `#{n ∈ Ω_m : ln n ≤ hi}` for a log-space cut.
    fn count_below(&self, hi: f64) -> u64 {
        let left = &self.left;
        let right = &self.right;
        self.exec
            .map_chunks(left.len(), CHUNK, |range| {
                let mut upper = right.rank(hi - left.logs[range.start]);
                let mut count = 0u64;
                for i in range {
                    let l = left.logs[i];
                    while upper > 0 && right.logs[upper - 1] > hi - l {
                        upper -= 1;
                    }
                    if upper == 0 {
                        break;
                    }
                    count += upper as u64;
                }
                count
            })
            .into_iter()
            .sum()
    }

    /// `Π_m{a < ζ_m ≤ b}`.
    pub fn exact_interval_mass(&self, a: f64, b: f64) -> Result<f64> {
        if !(a < b) {
            return Err(Error::invalid(
                "interval",
                format!("need a < b, got ({a}, {b}]"),
            ));
        }
        let lo = cut(a * self.log_largest);
        let hi = cut(b * self.log_largest);
        Ok(self.weight_between(lo, hi) / self.log_z.exp())
    }

    /// `Π_m{n ≤ p_m^s}`.
    pub fn mass_below(&self, s: f64) -> f64 {
        self.weight_between(f64::NEG_INFINITY, cut(s * self.log_largest)) / self.log_z.exp()
    }

    /// `M_m(t) = #{n ≤ t : n ∈ Ω_m}`.
    pub fn count_mm(&self, t: f64) -> u64 {
        if t < 1.0 {
            return 0;
        }
        self.count_below(cut(t.ln()))
    }
}
