//! Error terms of the interval form of the limit law.
//!
//! Split `(0, σ]` into `K` cells `(δ_k, δ_{k+1}]` with `δ_k = σk/K`. The
//! limit law says each cell has mass close to `e^{−γ}σ/K`; the error term is
//! `E_m^{(σ)}(k, K) = Π_m{δ_k < ζ_m ≤ δ_{k+1}} − e^{−γ}σ/K`.
//!
//! [`check_weighted_bound`] evaluates `(Z_m/p_m^σ) Σ_k p_m^{δ_k} E_k` against
//! `c σ³/(12 ζ(2)) + ε` where `c` is the limit of `ln³ p_m / K(m)²`.
//! [`lemma_margins`] checks the left/right Riemann-sum inequalities for
//! `t ↦ p_m^t` that drive that bound.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dickman::{EXP_NEG_GAMMA, ZETA2};
use crate::ensemble::{EnsembleSpec, HalfProductTable};
use crate::primes::PrimeTable;
use crate::summation::{compensated_sum, CompensatedSum};
use crate::{Error, Result};

/// Uniform partition `0 = δ_0 < … < δ_K = σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSpec {
    sigma: f64,
    deltas: Vec<f64>,
}

impl PartitionSpec {
    pub fn new(sigma: f64, cells: usize) -> Result<Self> {
        if !(sigma > 0.0 && sigma <= 1.0) {
            return Err(Error::invalid(
                "sigma",
                format!("need 0 < sigma <= 1, got {sigma}"),
            ));
        }
        if cells == 0 {
            return Err(Error::invalid("K", "need at least one cell"));
        }
        let deltas = (0..=cells)
            .map(|k| sigma * (k as f64 / cells as f64))
            .collect();
        Ok(Self { sigma, deltas })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn cells(&self) -> usize {
        self.deltas.len() - 1
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn width(&self) -> f64 {
        self.sigma / self.cells() as f64
    }
}

/// How the number of cells grows with `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KSchedule {
    /// `K = ⌈ln^{3/2} p_m⌉`, so `ln³ p_m / K² → 1`.
    COne,
    /// `K = ⌈ln² p_m⌉`, so `ln³ p_m / K² → 0`.
    CZero,
    /// `K = ⌈p_m^σ / ln p_m⌉`, which keeps `p_m^σ/(K ln p_m)` bounded.
    Fast,
    Fixed(usize),
}

impl KSchedule {
    pub fn cells(&self, log_p: f64, sigma: f64) -> usize {
        let k = match *self {
            KSchedule::COne => log_p.powf(1.5).ceil(),
            KSchedule::CZero => (log_p * log_p).ceil(),
            KSchedule::Fast => ((sigma * log_p).exp() / log_p).ceil(),
            KSchedule::Fixed(k) => k as f64,
        };
        (k as usize).max(1)
    }
}

impl FromStr for KSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c-one" => Ok(KSchedule::COne),
            "c-zero" => Ok(KSchedule::CZero),
            "fast" => Ok(KSchedule::Fast),
            other => other
                .parse::<usize>()
                .ok()
                .filter(|&k| k > 0)
                .map(KSchedule::Fixed)
                .ok_or_else(|| {
                    Error::invalid(
                        "schedule",
                        format!("expected c-one, c-zero, fast or a cell count, got `{other}`"),
                    )
                }),
        }
    }
}

impl fmt::Display for KSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSchedule::COne => f.write_str("c-one"),
            KSchedule::CZero => f.write_str("c-zero"),
            KSchedule::Fast => f.write_str("fast"),
            KSchedule::Fixed(k) => write!(f, "{k}"),
        }
    }
}

/// Exact cell masses and error terms for one `(m, σ, K)`.
#[derive(Debug, Clone)]
pub struct ErrorGrid {
    partition: PartitionSpec,
    m: usize,
    log_p: f64,
    log_z: f64,
    cell_mass: Vec<f64>,
    errors: Vec<f64>,
    /// `p_m^{δ_k − σ}`.
    weights: Vec<f64>,
}

impl ErrorGrid {
    /// Grid with caller-supplied cell masses; used for what-if checks.
    pub fn from_masses(
        spec: &EnsembleSpec,
        partition: PartitionSpec,
        cell_mass: Vec<f64>,
    ) -> Result<Self> {
        if cell_mass.len() != partition.cells() {
            return Err(Error::invalid(
                "cell_mass",
                format!("{} masses for {} cells", cell_mass.len(), partition.cells()),
            ));
        }
        let log_p = spec.log_largest();
        let target = EXP_NEG_GAMMA * partition.width();
        let errors = cell_mass.iter().map(|&mass| mass - target).collect();
        let weights = partition.deltas()[..partition.cells()]
            .iter()
            .map(|&d| ((d - partition.sigma()) * log_p).exp())
            .collect();
        Ok(Self {
            partition,
            m: spec.m(),
            log_p,
            log_z: spec.log_z(),
            cell_mass,
            errors,
            weights,
        })
    }

    pub fn partition(&self) -> &PartitionSpec {
        &self.partition
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn log_p(&self) -> f64 {
        self.log_p
    }

    pub fn cell_mass(&self) -> &[f64] {
        &self.cell_mass
    }

    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_k p_m^{δ_k − σ} E_k`.
    pub fn weighted_sum(&self) -> f64 {
        compensated_sum(self.weights.iter().zip(&self.errors).map(|(w, e)| w * e))
    }

    /// Same sum accumulated from the last cell down.
    pub fn weighted_sum_reversed(&self) -> f64 {
        compensated_sum(
            self.weights
                .iter()
                .zip(&self.errors)
                .rev()
                .map(|(w, e)| w * e),
        )
    }

    /// `⟨E⟩ = (1/K) Σ_k E_k`.
    pub fn mean_error(&self) -> f64 {
        compensated_sum(self.errors.iter().copied()) / self.errors.len() as f64
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.cell_mass.iter().copied())
    }

    /// `(Z_m/p_m^σ) Σ_k p_m^{δ_k} E_k`.
    pub fn statistic(&self) -> f64 {
        self.log_z.exp() * self.weighted_sum()
    }

    /// `ln³ p_m / K²`.
    pub fn realized_c(&self) -> f64 {
        self.log_p.powi(3) / (self.partition.cells() as f64).powi(2)
    }
}

/// Cell masses on `(δ_k, δ_{k+1}]` by exact enumeration.
pub fn error_grid(
    half: &HalfProductTable,
    spec: &EnsembleSpec,
    sigma: f64,
    cells: usize,
) -> Result<ErrorGrid> {
    let partition = PartitionSpec::new(sigma, cells)?;
    if half.log_z().to_bits() != spec.log_z().to_bits() {
        return Err(Error::invalid(
            "tableH",
            "half-product table was built for another ensemble",
        ));
    }
    let cell_mass = partition
        .deltas()
        .windows(2)
        .map(|w| half.exact_interval_mass(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    ErrorGrid::from_masses(spec, partition, cell_mass)
}

/// `c σ³/(12 ζ(2)) + ε`.
pub fn weighted_bound(c: f64, sigma: f64, epsilon: f64) -> f64 {
    c * sigma.powi(3) / (12.0 * ZETA2) + epsilon
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedBoundReport {
    pub m: usize,
    pub p_m: u64,
    pub sigma: f64,
    pub cells: usize,
    pub realized_c: f64,
    pub c: f64,
    pub epsilon: f64,
    pub statistic: f64,
    pub bound: f64,
    pub inside: bool,
    /// `bound − |statistic|`; negative when violated.
    pub margin: f64,
}

/// Evaluate the weighted error statistic for `K = schedule(m)` and compare
/// it with the bound. `c = None` uses the realized `ln³ p_m / K²`.
pub fn check_weighted_bound(
    half: &HalfProductTable,
    spec: &EnsembleSpec,
    sigma: f64,
    schedule: &KSchedule,
    c: Option<f64>,
    epsilon: f64,
) -> Result<WeightedBoundReport> {
    let cells = schedule.cells(spec.log_largest(), sigma);
    let grid = error_grid(half, spec, sigma, cells)?;
    Ok(report_for(&grid, spec.largest_prime(), c, epsilon))
}

pub fn report_for(grid: &ErrorGrid, p_m: u64, c: Option<f64>, epsilon: f64) -> WeightedBoundReport {
    let realized_c = grid.realized_c();
    let c = c.unwrap_or(realized_c);
    let sigma = grid.partition.sigma();
    let bound = weighted_bound(c, sigma, epsilon);
    let statistic = grid.statistic();
    WeightedBoundReport {
        m: grid.m,
        p_m,
        sigma,
        cells: grid.partition.cells(),
        realized_c,
        c,
        epsilon,
        statistic,
        bound,
        inside: statistic.abs() <= bound,
        margin: bound - statistic.abs(),
    }
}

/// Signed gaps of the right and left Riemann sums of `t ↦ p_m^t` on `[0, σ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaMargins {
    pub right_gap: f64,
    pub left_gap: f64,
    pub bound: f64,
}

impl LemmaMargins {
    /// `0 < right_gap ≤ bound` and `−bound ≤ left_gap < 0`.
    pub fn holds(&self) -> bool {
        self.right_gap > 0.0
            && self.right_gap <= self.bound
            && self.left_gap < 0.0
            && -self.bound <= self.left_gap
    }
}

pub fn lemma_margins(
    table: &PrimeTable,
    m: usize,
    sigma: f64,
    cells: usize,
) -> Result<LemmaMargins> {
    let partition = PartitionSpec::new(sigma, cells)?;
    let p = table.nth_prime(m)? as f64;
    Ok(riemann_margins(p, &partition))
}

fn riemann_margins(p: f64, partition: &PartitionSpec) -> LemmaMargins {
    let log_p = p.ln();
    let sigma = partition.sigma();
    let k = partition.cells() as f64;
    let width = partition.width();
    let rise = (sigma * log_p).exp_m1(); // p^σ − 1
    let integral = rise / log_p;
    let deltas = partition.deltas();
    let right: CompensatedSum = deltas[1..].iter().map(|d| (d * log_p).exp() * width).sum();
    let left: CompensatedSum = deltas[..deltas.len() - 1]
        .iter()
        .map(|d| (d * log_p).exp() * width)
        .sum();
    let bound = sigma.powi(3) * (sigma * log_p).exp() * log_p * log_p / (12.0 * k * k)
        + sigma * rise / (2.0 * k);
    LemmaMargins {
        right_gap: right.value() - integral,
        left_gap: left.value() - integral,
        bound,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorollarySums {
    /// `Σ_k E_k / p_m^{σ − δ_k}`.
    pub weighted: f64,
    /// `⟨E⟩`.
    pub mean: f64,
    /// `|weighted| · ln p_m`.
    pub weighted_decay: f64,
    /// `|mean| · K ln p_m / p_m^σ`.
    pub mean_decay: f64,
}

pub fn corollary_sums(grid: &ErrorGrid) -> CorollarySums {
    let weighted = grid.weighted_sum();
    let mean = grid.mean_error();
    let sigma = grid.partition.sigma();
    let k = grid.partition.cells() as f64;
    CorollarySums {
        weighted,
        mean,
        weighted_decay: weighted.abs() * grid.log_p,
        mean_decay: mean.abs() * k * grid.log_p / (sigma * grid.log_p).exp(),
    }
}
