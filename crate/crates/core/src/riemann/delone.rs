use std::collections::HashMap;

use serde::Serialize;

use super::source::PointSource;
use crate::error::{Error, Result};

/// Axis-aligned box `lo <= x <= hi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Region {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::invalid("region", "lo and hi must have the same nonzero length"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::invalid("region", "need finite lo <= hi on every axis"));
        }
        Ok(Self { lo, hi })
    }

    /// The cube `[-half, half]^dim`.
    pub fn centered_cube(dim: usize, half: f64) -> Result<Self> {
        Self::new(vec![-half; dim], vec![half; dim])
    }

    fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&v, (&a, &b))| a <= v && v <= b)
    }

    fn max_norm(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| a.abs().max(b.abs()).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Empirical Delone verdicts, valid only on the sampled region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeloneReport {
    pub r_cover: f64,
    pub r_pack: f64,
    pub relatively_dense: bool,
    pub uniformly_discrete: bool,
    pub test_region: Region,
}

impl DeloneReport {
    /// Density bounds `(c1, c2)` from cubes of side `2 r_cover` (each meets
    /// the set) and of diameter `2 r_pack` (each holds at most one point).
    pub fn density_bounds(&self) -> (f64, f64) {
        let d = self.test_region.lo.len() as i32;
        let big = 2.0 * self.r_cover;
        let small = 2.0 * self.r_pack / (d as f64).sqrt();
        (big.powi(-d), small.powi(-d))
    }
}

/// Samples the two Delone conditions on `region`.
///
/// Relative density is tested at every node of a grid of pitch `r_cover / 4`;
/// uniform discreteness asks that no two enumerated points of the region lie
/// within `2 r_pack` of each other.
pub fn delone_check<S: PointSource + ?Sized>(
    src: &S,
    r_cover: f64,
    r_pack: f64,
    region: &Region,
) -> Result<DeloneReport> {
    if !(r_cover > 0.0) || !(r_pack > 0.0) {
        return Err(Error::invalid("radius", "R and r must be positive"));
    }
    let d = src.dimension();
    if region.lo.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: region.lo.len(),
        });
    }

    // points that can serve a ball centred in the region
    let mut near = Vec::new();
    src.for_each_within(region.max_norm() + r_cover, &mut |x, _| near.push(x.to_vec()))?;

    let cover_index = CellIndex::new(&near, r_cover);
    let pitch = r_cover / 4.0;
    let relatively_dense = grid_nodes(region, pitch)
        .all(|x| cover_index.any_within(&near, &x, r_cover));

    let inside: Vec<Vec<f64>> = near.into_iter().filter(|x| region.contains(x)).collect();
    let sep = 2.0 * r_pack;
    let pack_index = CellIndex::new(&inside, sep);
    let uniformly_discrete = inside.iter().enumerate().all(|(i, x)| {
        pack_index
            .neighbours(x)
            .all(|j| j == i || dist2(&inside[j], x) > sep * sep)
    });

    Ok(DeloneReport {
        r_cover,
        r_pack,
        relatively_dense,
        uniformly_discrete,
        test_region: region.clone(),
    })
}

fn grid_nodes(region: &Region, pitch: f64) -> impl Iterator<Item = Vec<f64>> + '_ {
    let counts: Vec<usize> = region
        .lo
        .iter()
        .zip(&region.hi)
        .map(|(a, b)| ((b - a) / pitch).floor() as usize + 1)
        .collect();
    let total: usize = counts.iter().product();
    (0..total).map(move |mut n| {
        let mut x = vec![0.0; counts.len()];
        for axis in (0..counts.len()).rev() {
            let k = n % counts[axis];
            n /= counts[axis];
            x[axis] = region.lo[axis] + k as f64 * pitch;
        }
        x
    })
}

/// Uniform bucket grid over a point list.
struct CellIndex {
    cell: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl CellIndex {
    fn new(points: &[Vec<f64>], cell: f64) -> Self {
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(i);
        }
        Self { cell, buckets }
    }

    fn key(x: &[f64], cell: f64) -> Vec<i64> {
        x.iter().map(|v| (v / cell).floor() as i64).collect()
    }

    fn neighbours<'a>(&'a self, x: &[f64]) -> impl Iterator<Item = usize> + 'a {
        let base = Self::key(x, self.cell);
        let d = base.len();
        let total = 3usize.pow(d as u32);
        (0..total).flat_map(move |mut n| {
            let key: Vec<i64> = base
                .iter()
                .map(|&b| {
                    let off = (n % 3) as i64 - 1;
                    n /= 3;
                    b + off
                })
                .collect();
            self.buckets.get(&key).into_iter().flatten().copied()
        })
    }

    fn any_within(&self, points: &[Vec<f64>], x: &[f64], r: f64) -> bool {
        self.neighbours(x).any(|j| dist2(&points[j], x) <= r * r)
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
