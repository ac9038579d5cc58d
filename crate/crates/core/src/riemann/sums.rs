use num_complex::Complex64;

use super::source::PointSource;
use super::test_function::{Integrand, TestFunction};
use crate::error::{Error, Result};
use crate::summation::{ComplexNeumaier, Neumaier};

/// Slack on the enumeration radius so points sitting exactly on the scaled
/// support boundary are not lost to rounding in `support_radius / eps`.
const RADIUS_SLACK: f64 = 1e-12;

/// Scaled generalized Riemann sum `Σ_z eps^d f(eps z) ω(z)`.
pub fn riemann_sum<F, S>(f: &F, src: &S, eps: f64) -> Result<Complex64>
where
    F: Integrand + ?Sized,
    S: PointSource + ?Sized,
{
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid("eps", "scale must be positive and finite"));
    }
    if f.dimension() != src.dimension() {
        return Err(Error::DimensionMismatch {
            expected: src.dimension(),
            found: f.dimension(),
        });
    }
    let support = f.support_radius();
    if support == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let d = f.dimension();
    let vol = eps.powi(d as i32);
    let radius = support / eps * (1.0 + RADIUS_SLACK);
    let mut acc = ComplexNeumaier::new();
    let mut scaled = vec![0.0; d];
    src.for_each_within(radius, &mut |z, w| {
        for (s, &c) in scaled.iter_mut().zip(z) {
            *s = eps * c;
        }
        let v = f.eval(&scaled);
        if v != 0.0 {
            acc.add(Complex64::new(vol * v, 0.0) * w);
        }
    })?;
    Ok(acc.value())
}

/// Where the sample point sits inside each cubical cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// The lower corner `k h`.
    Corner,
    /// The centre `(k + 1/2) h`.
    Center,
}

/// Classical Riemann sum `Σ_α f(ξ_α) vol(D_α)` over the grid of cubes of
/// side `cell_size` that meet the support's bounding box.
pub fn partition_riemann_sum(f: &TestFunction, cell_size: f64, mode: SampleMode) -> Result<f64> {
    if !(cell_size > 0.0) || !cell_size.is_finite() {
        return Err(Error::invalid("cell_size", "cell size must be positive and finite"));
    }
    let d = f.dimension();
    let (lo, hi) = f.bounding_box();
    let ranges: Vec<(i64, i64)> = lo
        .iter()
        .zip(&hi)
        .map(|(&a, &b)| ((a / cell_size).floor() as i64, (b / cell_size).floor() as i64))
        .collect();
    let offset = match mode {
        SampleMode::Corner => 0.0,
        SampleMode::Center => 0.5,
    };
    let vol = cell_size.powi(d as i32);
    let mut acc = Neumaier::new();
    let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut x = vec![0.0; d];
    'outer: loop {
        for (xi, &k) in x.iter_mut().zip(&idx) {
            *xi = (k as f64 + offset) * cell_size;
        }
        let v = f.eval(&x);
        if v != 0.0 {
            acc.add(vol * v);
        }
        // odometer, last axis fastest
        for axis in (0..d).rev() {
            if idx[axis] < ranges[axis].1 {
                idx[axis] += 1;
                continue 'outer;
            }
            idx[axis] = ranges[axis].0;
        }
        break;
    }
    Ok(acc.value())
}

/// `∫ f`, exact where a closed form exists, otherwise partition sums refined
/// until two successive halvings agree to `1e-8`.
pub fn integral(f: &TestFunction) -> f64 {
    if let Some(v) = f.exact_integral() {
        return v;
    }
    const TOL: f64 = 1e-8;
    let (lo, hi) = f.bounding_box();
    let extent = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| b - a)
        .fold(0.0, f64::max);
    if extent == 0.0 {
        return 0.0;
    }
    let d = f.dimension() as u32;
    let mut h = extent / 16.0;
    let mut prev = partition_riemann_sum(f, h, SampleMode::Center).unwrap_or(0.0);
    loop {
        h *= 0.5;
        let cur = partition_riemann_sum(f, h, SampleMode::Center).unwrap_or(prev);
        // stop before the grid exceeds ~5e7 cells
        let cells = (extent / h).powi(d as i32);
        if (cur - prev).abs() < TOL || cells * 2f64.powi(d as i32) > 5e7 {
            return cur;
        }
        prev = cur;
    }
}
