use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::source::PointSource;
use super::sums::{integral, riemann_sum};
use super::test_function::TestFunction;
use crate::error::{Error, Result};

/// Number of trailing schedule points used by the extrapolation fit.
pub const FIT_POINTS: usize = 3;

/// Scaled Riemann sums along an `eps` schedule and their extrapolated limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub epsilons: Vec<f64>,
    #[serde(serialize_with = "ser_complex_vec")]
    pub scaled_sums: Vec<Complex64>,
    pub integral: f64,
    #[serde(serialize_with = "ser_complex_vec")]
    pub density_samples: Vec<Complex64>,
    #[serde(serialize_with = "ser_complex")]
    pub extrapolated: Complex64,
    pub error_estimate: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_complex_vec<S: serde::Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    zs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

/// Geometric schedule `start, start/2, ...` down to the first value `<= min`.
pub fn halving_schedule(start: f64, min: f64) -> Result<Vec<f64>> {
    if !(start > 0.0) || !(min > 0.0) || !start.is_finite() {
        return Err(Error::invalid("schedule", "bounds must be positive"));
    }
    let mut out = vec![start];
    let mut e = start;
    while e > min {
        e *= 0.5;
        out.push(e);
    }
    Ok(out)
}

/// The default schedule `2^-4, ..., 2^-12`.
pub fn default_schedule() -> Vec<f64> {
    (4..=12).map(|k| 2f64.powi(-k)).collect()
}

/// Estimates the constant density `c(Γ, ω)` from `σ(f^ε, Γ, ω) / ∫f`.
///
/// The extrapolated value is the intercept of a least-squares line through
/// the last [`FIT_POINTS`] density samples as a function of `eps`; the error
/// estimate is the largest deviation of the last two samples from it.
pub fn estimate_density<S: PointSource + ?Sized>(
    f: &TestFunction,
    src: &S,
    eps_schedule: &[f64],
) -> Result<DensityEstimate> {
    validate_schedule(eps_schedule)?;
    let int = integral(f);
    if int == 0.0 || !int.is_finite() {
        return Err(Error::ZeroIntegral);
    }
    // each sum is sequential, so parallelising across eps keeps results bit-identical
    let scaled_sums = eps_schedule
        .par_iter()
        .map(|&eps| riemann_sum(f, src, eps))
        .collect::<Result<Vec<_>>>()?;
    Ok(from_samples(eps_schedule.to_vec(), scaled_sums, int))
}

pub(crate) fn validate_schedule(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::invalid("eps_schedule", "schedule is empty"));
    }
    if eps.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::invalid("eps_schedule", "all scales must be positive"));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("eps_schedule", "schedule must be strictly decreasing"));
    }
    Ok(())
}

pub(crate) fn from_samples(epsilons: Vec<f64>, scaled_sums: Vec<Complex64>, int: f64) -> DensityEstimate {
    let density_samples: Vec<Complex64> = scaled_sums.iter().map(|s| s / int).collect();
    let n = epsilons.len();
    let k = n.min(FIT_POINTS);
    let xs = &epsilons[n - k..];
    let ys = &density_samples[n - k..];
    let extrapolated = Complex64::new(
        linear_intercept(xs, &ys.iter().map(|z| z.re).collect::<Vec<_>>()),
        linear_intercept(xs, &ys.iter().map(|z| z.im).collect::<Vec<_>>()),
    );
    let error_estimate = density_samples[n.saturating_sub(2)..]
        .iter()
        .map(|z| (z - extrapolated).norm())
        .fold(0.0, f64::max);
    DensityEstimate {
        epsilons,
        scaled_sums,
        integral: int,
        density_samples,
        extrapolated,
        error_estimate,
    }
}

/// Intercept at `x = 0` of the least-squares line through `(xs, ys)`.
/// A single point is its own intercept.
pub fn linear_intercept(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() == 1 {
        return ys[0];
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return my;
    }
    my - sxy / sxx * mx
}
