//! Weighted square-free ensembles and the Dickman-De Bruijn limit law.
//!
//! The ensemble `Ω_m` consists of the square-free products of the first `m`
//! primes, each `n` weighted by `1/n`. Under this weighting the normalized
//! log-size `ζ_m = ln n / ln p_m` converges to the Dickman-De Bruijn
//! distribution with density `e^{-γ} ρ(t)`. The crate provides:
//!
//! * [`primes`]: sieving, `N(t)`, Mertens products.
//! * [`ensemble`]: the ensemble itself, Monte Carlo sampling of `ζ_m`, and
//!   exact interval masses by meet-in-the-middle enumeration.
//! * [`dickman`]: `ρ(t)`, the limiting density and its CDF.
//! * [`charfn`]: the limiting characteristic function by two independent
//!   routes, empirical characteristic functions, and the summation-by-parts
//!   boundary term.
//! * [`errorterms`]: per-cell error terms of the interval limit law, the
//!   Riemann-sum margins and the weighted error statistic.
//! * [`classical`]: square-free counts, smooth-number counts and the
//!   `θ_n` record model.
//!
//! Data-parallel loops go through [`exec::Execution`]; with the `parallel`
//! feature disabled every loop runs sequentially. Reductions use a fixed
//! chunking so results are bit-identical in both modes.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod charfn;
pub mod classical;
pub mod dickman;
pub mod ensemble;
pub mod error;
pub mod errorterms;
pub mod exec;
pub mod primes;
pub mod quad;
pub mod rng;
pub mod summation;

pub use error::{Error, Result};
pub use exec::Execution;
