use std::path::Path;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A primitive Pythagorean triple in canonical form: odd leg `x`, even leg `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PPTriple {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub m: u64,
    pub n: u64,
}

impl PPTriple {
    /// Re-checks every structural invariant in exact arithmetic.
    pub fn is_valid(&self) -> bool {
        let (x, y, z) = (self.x as u128, self.y as u128, self.z as u128);
        let (m, n) = (self.m as u128, self.n as u128);
        x * x + y * y == z * z
            && x.gcd(&y) == 1
            && y.gcd(&z) == 1
            && x.gcd(&z) == 1
            && x % 2 == 1
            && y % 2 == 0
            && m > n
            && x == m * m - n * n
            && y == 2 * m * n
            && z == m * m + n * n
    }
}

/// Builds `(m^2 - n^2, 2mn, m^2 + n^2)` after checking the generator conditions.
pub fn ppt_from_pair(m: i64, n: i64) -> Result<PPTriple> {
    if n < 1 {
        return Err(Error::invalid("n", format!("n >= 1 violated (n = {n})")));
    }
    if m <= n {
        return Err(Error::invalid("m", format!("m > n violated (m = {m}, n = {n})")));
    }
    if m.gcd(&n) != 1 {
        return Err(Error::invalid("m", format!("gcd(m, n) = 1 violated (m = {m}, n = {n})")));
    }
    if (m - n) % 2 == 0 {
        return Err(Error::invalid("m", format!("m - n odd violated (m = {m}, n = {n})")));
    }
    if m > 2_000_000_000 {
        return Err(Error::invalid("m", "m too large for u64 triples"));
    }
    Ok(triple_unchecked(m as u64, n as u64))
}

fn triple_unchecked(m: u64, n: u64) -> PPTriple {
    PPTriple {
        x: m * m - n * n,
        y: 2 * m * n,
        z: m * m + n * n,
        m,
        n,
    }
}

fn is_generator(m: u64, n: u64) -> bool {
    (m - n) % 2 == 1 && m.gcd(&n) == 1
}

/// All triples with `z <= z_max`, ordered by hypotenuse and then by even leg.
pub fn enumerate_ppt(z_max: u64) -> Vec<PPTriple> {
    let mut out = Vec::new();
    let mut m = 2u64;
    while m * m < z_max {
        for n in (1..m).take_while(|&n| m * m + n * n <= z_max) {
            if is_generator(m, n) {
                out.push(triple_unchecked(m, n));
            }
        }
        m += 1;
    }
    out.sort_unstable_by_key(|t| (t.z, t.y));
    out
}

/// The `N`-th triple (1-based) in the canonical order.
pub fn nth_ppt(index: usize) -> Result<PPTriple> {
    if index == 0 {
        return Err(Error::invalid("N", "N must be at least 1"));
    }
    // z_N / N tends to 2 pi, so this bound is close and rarely needs to grow
    let mut z_max = (7.0 * index as f64) as u64 + 25;
    loop {
        let list = enumerate_ppt(z_max);
        if list.len() >= index {
            return Ok(list[index - 1]);
        }
        z_max *= 2;
    }
}

/// `z_N / N`, which tends to `2 pi`.
pub fn lehmer_ratio(index: usize) -> Result<f64> {
    Ok(nth_ppt(index)?.z as f64 / index as f64)
}

/// Counts coprime `(m, n)` with `m - n` odd, `alpha <= n/m <= beta` and `m^2 + n^2 <= N`.
pub fn sector_count(bound: u64, alpha: f64, beta: f64) -> Result<u64> {
    if bound < 1 {
        return Err(Error::invalid("N", "N must be at least 1"));
    }
    if !(alpha.is_finite() && beta.is_finite() && 0.0 <= alpha && alpha < beta && beta <= 1.0) {
        return Err(Error::invalid(
            "alpha",
            format!("need 0 <= alpha < beta <= 1, got alpha = {alpha}, beta = {beta}"),
        ));
    }
    let m_max = (bound as f64).sqrt() as u64 + 1;
    let count = (2..=m_max)
        .into_par_iter()
        .map(|m| {
            (1..m)
                .filter(|&n| {
                    m * m + n * n <= bound
                        && in_sector(m, n, alpha, beta)
                        && is_generator(m, n)
                })
                .count() as u64
        })
        .sum();
    Ok(count)
}

fn in_sector(m: u64, n: u64, alpha: f64, beta: f64) -> bool {
    let (m, n) = (m as f64, n as f64);
    alpha * m <= n && n <= beta * m
}

/// Limit of `sector_count(N, alpha, beta) / N`.
pub fn sector_density(alpha: f64, beta: f64) -> f64 {
    2.0 / (std::f64::consts::PI.powi(2)) * ((beta - alpha) / (1.0 + alpha * beta)).atan()
}

/// One row of the published table of triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "N")]
    pub index: usize,
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

/// Reads a `N,x,y,z` CSV table of triples.
pub fn load_triple_table(path: impl AsRef<Path>) -> Result<Vec<TableRow>> {
    let mut reader = csv::Reader::from_path(path.as_ref())
        .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
    reader
        .deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}
