//! Characteristic function of the Dickman-De Bruijn law.
//!
//! `φ(λ) = exp ∫_0^1 (e^{iλv} − 1)/v dv`. Two independent evaluations are
//! provided: [`phi_quadrature`] integrates the exponent numerically, while
//! [`phi_closed`] uses the sine and cosine integrals,
//! `φ(λ) = exp(−Cin(λ) + i Si(λ))` for `λ > 0` with
//! `Cin(x) = γ + ln x − Ci(x)`, and conjugate symmetry for `λ < 0`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::dickman::EULER_GAMMA;
use crate::ensemble::EnsembleSpec;
use crate::exec::{Execution, CHUNK};
use crate::primes::PrimeTable;
use crate::quad;
use crate::summation::CompensatedSum;
use crate::{Error, Result};

pub type ComplexValue = Complex64;

/// Largest `|λ|` accepted by [`phi_quadrature`].
pub const QUADRATURE_LAMBDA_CAP: f64 = 1e4;

/// Below this argument `si`, `ci` use their power series.
const SERIES_SWITCH: f64 = 4.0;

/// Width of the `[0, a]` piece integrated by series in [`phi_quadrature`].
const SERIES_PATCH: f64 = 1e-4;

fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // (−1)^k x^{2k+1} / (2k+1)!
    let mut sum = x;
    for k in 1..60 {
        let n = 2 * k as u32;
        term *= -x2 / (n as f64 * (n + 1) as f64);
        let add = term / (n + 1) as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Cin(x) = ∫_0^x (1 − cos u)/u du` by its power series.
fn cin_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0; // (−1)^{k+1} x^{2k} / (2k)!, starting k = 0
    let mut sum = 0.0;
    for k in 1..60 {
        let n = 2 * k as u32;
        term *= -x2 / ((n - 1) as f64 * n as f64);
        let add = -term / n as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `(Ci(x), Si(x))` for `x > 0` from the continued fraction of `E_1(ix)`.
fn cisi_continued_fraction(x: f64) -> (f64, f64) {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..10_000u32 {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let delta = c * d;
        h *= delta;
        if (delta.re - 1.0).abs() + delta.im.abs() < 1e-16 {
            break;
        }
    }
    let e1 = Complex64::new(x.cos(), -x.sin()) * h;
    (-e1.re, FRAC_PI_2 + e1.im)
}

/// Sine integral `Si(x) = ∫_0^x sin u / u du`, odd in `x`.
pub fn si(x: f64) -> f64 {
    let a = x.abs();
    let value = if a == 0.0 {
        0.0
    } else if a <= SERIES_SWITCH {
        si_series(a)
    } else {
        cisi_continued_fraction(a).1
    };
    value.copysign(x)
}

/// Cosine integral `Ci(x) = −∫_x^∞ cos u / u du`, `x > 0`.
pub fn ci(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::invalid("x", format!("Ci needs x > 0, got {x}")));
    }
    Ok(if x <= SERIES_SWITCH {
        EULER_GAMMA + x.ln() - cin_series(x)
    } else {
        cisi_continued_fraction(x).0
    })
}

/// `Cin(x) = ∫_0^x (1 − cos u)/u du = γ + ln x − Ci(x)`, even in `x`.
pub fn cin(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        0.0
    } else if a <= SERIES_SWITCH {
        cin_series(a)
    } else {
        EULER_GAMMA + a.ln() - cisi_continued_fraction(a).0
    }
}

/// `φ(λ)` from the closed sine/cosine-integral form.
pub fn phi_closed(lambda: f64) -> ComplexValue {
    if lambda == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let a = lambda.abs();
    let value = Complex64::from_polar((-cin(a)).exp(), si(a));
    if lambda < 0.0 {
        value.conj()
    } else {
        value
    }
}

/// `φ(λ)` by numerical integration of the exponent.
pub fn phi_quadrature(lambda: f64) -> Result<ComplexValue> {
    if !(lambda.abs() <= QUADRATURE_LAMBDA_CAP) {
        return Err(Error::out_of_range(
            "lambda",
            format!("|lambda| <= {QUADRATURE_LAMBDA_CAP} required, got {lambda}"),
        ));
    }
    if lambda == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    // ∫_0^a (e^{iλv} − 1)/v dv = Σ_{k≥1} (iλa)^k / (k · k!)
    let x = Complex64::new(0.0, lambda * SERIES_PATCH);
    let mut power = Complex64::new(1.0, 0.0);
    let mut head = Complex64::new(0.0, 0.0);
    for k in 1..40u32 {
        power = power * x / k as f64;
        let add = power / k as f64;
        head += add;
        if add.norm() < 1e-20 {
            break;
        }
    }
    let panels = (lambda.abs() / std::f64::consts::PI).ceil().max(1.0) as usize;
    let re = quad::integrate(
        |v| {
            let s = (0.5 * lambda * v).sin();
            -2.0 * s * s / v
        },
        SERIES_PATCH,
        1.0,
        1e-12,
        panels,
        30,
    );
    let im = quad::integrate(
        |v| (lambda * v).sin() / v,
        SERIES_PATCH,
        1.0,
        1e-12,
        panels,
        30,
    );
    Ok((head + Complex64::new(re.value, im.value)).exp())
}

/// `(1/N) Σ e^{iλζ}` over samples.
pub fn empirical_charfn(samples: &[f64], lambda: f64) -> Result<ComplexValue> {
    empirical_charfn_with(samples, lambda, Execution::default())
}

pub fn empirical_charfn_with(
    samples: &[f64],
    lambda: f64,
    exec: Execution,
) -> Result<ComplexValue> {
    if samples.is_empty() {
        return Err(Error::invalid("samples", "empty sample"));
    }
    let parts = exec.map_chunks(samples.len(), CHUNK, |range| {
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for &z in &samples[range] {
            let (s, c) = (lambda * z).sin_cos();
            re.add(c);
            im.add(s);
        }
        (re, im)
    });
    let (re, im): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    let n = samples.len() as f64;
    Ok(Complex64::new(
        re.into_iter().sum::<CompensatedSum>().value() / n,
        im.into_iter().sum::<CompensatedSum>().value() / n,
    ))
}

/// Principal `ln(1 + z)`, accurate for small `|z|`.
fn ln_1p(z: Complex64) -> Complex64 {
    Complex64::new(
        0.5 * (2.0 * z.re + z.norm_sqr()).ln_1p(),
        z.im.atan2(1.0 + z.re),
    )
}

/// Exact characteristic function of `ζ_m` under `Π_m`:
/// `Π_j (1 + (e^{iλ ln p_j / ln p_m} − 1)/(1 + p_j))`.
pub fn ensemble_charfn(spec: &EnsembleSpec, lambda: f64) -> ComplexValue {
    let scale = lambda / spec.log_largest();
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for (&lp, &q) in spec.log_primes().iter().zip(spec.inclusion_probs()) {
        let s = (scale * lp).sin();
        // e^{iθ} − 1 = (cos θ − 1) + i sin θ, with cos θ − 1 = −2 sin²(θ/2)
        let half = (0.5 * scale * lp).sin();
        let w = ln_1p(Complex64::new(-2.0 * half * half * q, s * q));
        re.add(w.re);
        im.add(w.im);
    }
    Complex64::new(re.value(), im.value()).exp()
}

/// `N(p_m) · f_m(p_m + 1)` with `f_m(s) = ln(1 + (e^{iλ ln s/ln p_m} − 1)/(1 + s))`,
/// the boundary term left by summation by parts in `ln φ_m`.
pub fn boundary_term(table: &PrimeTable, m: usize, lambda: f64) -> Result<ComplexValue> {
    let p = table.nth_prime(m)? as f64;
    let count = table.prime_count(p)? as f64;
    let s = p + 1.0;
    let theta = lambda * s.ln() / p.ln();
    let half = (0.5 * theta).sin();
    let z = Complex64::new(-2.0 * half * half, theta.sin()) / (1.0 + s);
    Ok(ln_1p(z) * count)
}
