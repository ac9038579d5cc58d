//! Exact checks of the Möbius (inclusion-exclusion) expansions of sums over
//! primitive lattice points. Everything here runs in arbitrary-precision
//! rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::mobius::mobius_sieve;
use super::primitive::{is_primitive, PrimitiveSetKind};
use crate::error::{Error, Result};
use crate::riemann::for_each_integer_point;

/// Rational-valued function on `Z^d` with compact support.
pub trait LatticeFunction {
    fn dimension(&self) -> usize;
    /// Integer `R` such that the function vanishes whenever `|z| > R`.
    fn support_radius(&self) -> u64;
    fn value(&self, z: &[i64]) -> BigRational;
}

/// `weight` on the integer box `lo <= z <= hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxFunction {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub weight: BigRational,
}

impl BoxFunction {
    pub fn indicator(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        Self::weighted(lo, hi, BigRational::one())
    }

    pub fn weighted(lo: Vec<i64>, hi: Vec<i64>, weight: BigRational) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::invalid("lo", "box corners must have equal nonzero length"));
        }
        Ok(Self { lo, hi, weight })
    }
}

impl LatticeFunction for BoxFunction {
    fn dimension(&self) -> usize {
        self.lo.len()
    }

    fn support_radius(&self) -> u64 {
        let r2: u64 = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| a.unsigned_abs().max(b.unsigned_abs()).pow(2))
            .sum();
        ceil_sqrt(r2)
    }

    fn value(&self, z: &[i64]) -> BigRational {
        let inside = z
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| a <= v && v <= b);
        if inside {
            self.weight.clone()
        } else {
            BigRational::zero()
        }
    }
}

/// `weight` on the integer points of the closed ball `|z - center|^2 <= radius_sq`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallFunction {
    pub center: Vec<i64>,
    pub radius_sq: u64,
    pub weight: BigRational,
}

impl LatticeFunction for BallFunction {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn support_radius(&self) -> u64 {
        let c2: u64 = self.center.iter().map(|c| c.unsigned_abs().pow(2)).sum();
        ceil_sqrt(c2) + ceil_sqrt(self.radius_sq)
    }

    fn value(&self, z: &[i64]) -> BigRational {
        let d2: u64 = z
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b).unsigned_abs().pow(2))
            .sum();
        if d2 <= self.radius_sq {
            self.weight.clone()
        } else {
            BigRational::zero()
        }
    }
}

/// Explicit finite table of values; absent points are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TableFunction {
    dim: usize,
    values: BTreeMap<Vec<i64>, BigRational>,
}

impl TableFunction {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            values: BTreeMap::new(),
        }
    }

    /// Indicator of a single point.
    pub fn point(z: Vec<i64>) -> Self {
        let mut t = Self::new(z.len());
        t.set(z, BigRational::one());
        t
    }

    pub fn set(&mut self, z: Vec<i64>, v: BigRational) {
        assert_eq!(z.len(), self.dim);
        if v.is_zero() {
            self.values.remove(&z);
        } else {
            self.values.insert(z, v);
        }
    }
}

impl LatticeFunction for TableFunction {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn support_radius(&self) -> u64 {
        self.values
            .keys()
            .map(|z| ceil_sqrt(z.iter().map(|c| c.unsigned_abs().pow(2)).sum()))
            .max()
            .unwrap_or(0)
    }

    fn value(&self, z: &[i64]) -> BigRational {
        self.values.get(z).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Both sides of an exact identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    #[serde(serialize_with = "ser_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    pub equal: bool,
}

impl IdentityCheck {
    fn new(lhs: BigRational, rhs: BigRational) -> Self {
        let equal = lhs == rhs;
        Self { lhs, rhs, equal }
    }
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// `Σ_{z ∈ Z^d_prim} f(z)` against `Σ_k μ(k) Σ_{w ≠ 0} f(k w)`.
///
/// Only `k <= R` can contribute, since a surviving term needs
/// `|k w| <= R` with `|w| >= 1`.
pub fn iep_mobius_identity_check<F: LatticeFunction + ?Sized>(f: &F) -> Result<IdentityCheck> {
    let d = f.dimension();
    let r = f.support_radius();
    let lhs = sum_over(d, r as f64, |z| {
        if is_primitive(z) {
            f.value(z)
        } else {
            BigRational::zero()
        }
    });

    let mu = mobius_sieve(r.max(1) as usize)?;
    let mut rhs = BigRational::zero();
    let mut scaled = vec![0i64; d];
    for k in 1..=r as i64 {
        let m = mu.mu(k as usize);
        if m == 0 {
            continue;
        }
        let inner = sum_over(d, r as f64 / k as f64, |w| {
            if w.iter().all(|&c| c == 0) {
                return BigRational::zero();
            }
            for (s, &c) in scaled.iter_mut().zip(w) {
                *s = k * c;
            }
            f.value(&scaled)
        });
        rhs += inner * BigRational::from_integer(BigInt::from(m));
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

/// `Σ_{z ∈ (Z^odd)^2_prim} f(z)` against `Σ_k μ(k) Σ_{h>=0} Σ_{w ∈ (Z^odd)^2} f(k 2^h w)`,
/// truncated at `k 2^h <= R`.
pub fn iep_odd_identity_check<F: LatticeFunction + ?Sized>(f: &F) -> Result<IdentityCheck> {
    if f.dimension() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.dimension(),
        });
    }
    let r = f.support_radius();
    let lhs = sum_over(2, r as f64, |z| {
        if PrimitiveSetKind::OddPrim.contains(z) {
            f.value(z)
        } else {
            BigRational::zero()
        }
    });

    let mu = mobius_sieve(r.max(1) as usize)?;
    let mut rhs = BigRational::zero();
    for k in 1..=r as i64 {
        let m = mu.mu(k as usize);
        if m == 0 {
            continue;
        }
        let mut scale = k;
        let mut inner = BigRational::zero();
        while scale as u64 <= r {
            inner += sum_over(2, r as f64 / scale as f64, |w| {
                if w[0].rem_euclid(2) == 1 && w[1].rem_euclid(2) == 1 {
                    f.value(&[scale * w[0], scale * w[1]])
                } else {
                    BigRational::zero()
                }
            });
            scale *= 2;
        }
        rhs += inner * BigRational::from_integer(BigInt::from(m));
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

fn sum_over(d: usize, radius: f64, mut term: impl FnMut(&[i64]) -> BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for_each_integer_point(d, radius, |z| {
        let v = term(z);
        if !v.is_zero() {
            acc += v;
        }
    });
    acc
}

fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}
