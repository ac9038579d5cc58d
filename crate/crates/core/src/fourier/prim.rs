use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use super::quadrature::BumpTransform;
use crate::arith::{mobius_sieve, zeta, MobiusTable, PrimitivePoints, PrimitiveSetKind};
use crate::error::{Error, Result};
use crate::riemann::{ball_volume, estimate_density, for_each_integer_point, DensityEstimate, PointSource, TestFunction};
use crate::summation::{ComplexNeumaier, Neumaier};

/// `n(ξ)`: least common multiple of the reduced denominators.
pub fn n_of_xi(xi: &[Ratio<i64>]) -> u64 {
    xi.iter().fold(1u64, |acc, r| acc.lcm(&(*r.denom() as u64)))
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid("d", "dimension must be at least 2"));
    }
    Ok(())
}

/// `a_N` for frequencies with `n(ξ) = D`:
/// `μ(D)/D^d Σ_{ℓ <= N/D, gcd(ℓ, D) = 1} μ(ℓ)/ℓ^d`.
pub fn prim_coefficient(table: &MobiusTable, d: usize, n: u64, den: u64) -> f64 {
    assert!(n as usize <= table.limit() && den >= 1);
    let mu_d = table.mu(den as usize);
    if mu_d == 0 || den > n {
        return 0.0;
    }
    let inner = (1..=n / den)
        .rev()
        .filter(|l| l.gcd(&den) == 1)
        .map(|l| table.mu(l as usize) as f64 * (l as f64).powi(-(d as i32)))
        .collect::<Neumaier>()
        .value();
    mu_d as f64 * (den as f64).powi(-(d as i32)) * inner
}

/// The `N → ∞` limit `μ(D)/D^d ζ(d)^{-1} Π_{p | D} (1 - p^{-d})^{-1}`.
pub fn prim_coefficient_limit(d: usize, den: u64) -> Result<f64> {
    check_dim(d)?;
    if den == 0 {
        return Err(Error::invalid("n_xi", "denominator must be positive"));
    }
    let table = mobius_sieve(den as usize)?;
    let mu = table.mu(den as usize);
    if mu == 0 {
        return Ok(0.0);
    }
    let z = zeta(d as u32, 1e-16)?;
    let euler: f64 = table
        .factorize(den as usize)
        .iter()
        .map(|&(p, _)| 1.0 / (1.0 - (p as f64).powi(-(d as i32))))
        .product();
    Ok(mu as f64 * (den as f64).powi(-(d as i32)) / z * euler)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimEntry {
    #[serde(serialize_with = "ser_ratios")]
    pub xi: Vec<Ratio<i64>>,
    pub n_xi: u64,
    pub a_n: f64,
    pub a_limit: f64,
}

fn ser_ratios<S: serde::Serializer>(v: &[Ratio<i64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl PrimEntry {
    pub fn xi_f64(&self) -> Vec<f64> {
        self.xi.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect()
    }
}

/// Upper limit on the number of frequencies [`prim_expansion`] materializes.
pub const MAX_ENTRIES: f64 = 2e7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimExpansion {
    pub d: usize,
    pub n: u64,
    pub mertens: i64,
    pub entries: Vec<PrimEntry>,
}

/// Frequencies `b / D` with squarefree `D <= n`, `gcd(D, b) = 1` and `|b| <= cutoff D`.
fn for_each_frequency(table: &MobiusTable, d: usize, n: u64, xi_cutoff: f64, mut visit: impl FnMut(u64, &[i64])) {
    for den in 1..=n {
        if table.mu(den as usize) == 0 {
            continue;
        }
        for_each_integer_point(d, xi_cutoff * den as f64, |b| {
            let g = b.iter().fold(den, |acc, &v| acc.gcd(&v.unsigned_abs()));
            if g == 1 {
                visit(den, b);
            }
        });
    }
}

/// The frequencies of `Λ_N` with `|ξ| <= xi_cutoff` and their coefficients,
/// sorted by `|ξ|` and then lexicographically.
pub fn prim_expansion(d: usize, n: u64, xi_cutoff: f64) -> Result<PrimExpansion> {
    check_dim(d)?;
    if n == 0 {
        return Err(Error::invalid("N", "N must be at least 1"));
    }
    if !(xi_cutoff >= 0.0 && xi_cutoff.is_finite()) {
        return Err(Error::invalid("xi_cutoff", "cutoff must be finite and non-negative"));
    }
    let table = mobius_sieve(n as usize)?;
    let expected: f64 = (1..=n)
        .filter(|&den| table.mu(den as usize) != 0)
        .map(|den| ball_volume(d, xi_cutoff * den as f64 + 1.0))
        .sum();
    if expected > MAX_ENTRIES {
        return Err(Error::invalid(
            "xi_cutoff",
            format!("about {expected:.2e} frequencies requested; lower N or xi_cutoff"),
        ));
    }
    let coeffs: Vec<(f64, f64)> = (0..=n)
        .map(|den| {
            if den == 0 || table.mu(den as usize) == 0 {
                Ok((0.0, 0.0))
            } else {
                Ok((prim_coefficient(&table, d, n, den), prim_coefficient_limit(d, den)?))
            }
        })
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for_each_frequency(&table, d, n, xi_cutoff, |den, b| {
        let (a_n, a_limit) = coeffs[den as usize];
        entries.push(PrimEntry {
            xi: b.iter().map(|&v| Ratio::new(v, den as i64)).collect(),
            n_xi: den,
            a_n,
            a_limit,
        });
    });
    entries.sort_by(|a, b| {
        let key = |e: &PrimEntry| e.xi.iter().map(|r| r * r).sum::<Ratio<i64>>();
        key(a).cmp(&key(b)).then_with(|| a.xi.cmp(&b.xi))
    });
    Ok(PrimExpansion {
        d,
        n,
        mertens: table.mertens(n as usize),
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimPoissonCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub mertens: i64,
    /// Rough size of the neglected frequencies: `|F(cutoff)|` times the
    /// coefficient mass of the shell out to twice the cutoff.
    pub tail_estimate: f64,
    pub terms: usize,
}

/// `Σ_{z primitive} f(z)` against
/// `Σ_{ξ∈Λ_N, |ξ| <= xi_cutoff} a_N(ξ) f^(ξ) - M(N) f(0)`.
///
/// The identity is exact once the support of `f` lies in the closed ball of
/// radius `N`, so that is required.
pub fn prim_poisson_check(d: usize, f: &TestFunction, n: u64, xi_cutoff: f64) -> Result<PrimPoissonCheck> {
    check_dim(d)?;
    if f.dimension() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.dimension(),
        });
    }
    if n == 0 {
        return Err(Error::invalid("N", "N must be at least 1"));
    }
    if f.support_radius() > n as f64 {
        return Err(Error::invalid(
            "f",
            format!("support radius {} exceeds N = {n}", f.support_radius()),
        ));
    }
    if !(xi_cutoff >= 0.0 && xi_cutoff.is_finite()) {
        return Err(Error::invalid("xi_cutoff", "cutoff must be finite and non-negative"));
    }
    let ft = BumpTransform::new(f, xi_cutoff)?;
    let table = mobius_sieve(n as usize)?;
    let mertens = table.mertens(n as usize);

    let prim = PrimitivePoints::new(PrimitiveSetKind::Prim(d))?;
    let mut lhs = Neumaier::default();
    prim.for_each_within(f.support_radius(), &mut |x, _| lhs.add(f.eval(x)))?;
    let lhs = lhs.value();

    let center = f.center();
    let centered = center.iter().all(|&c| c == 0.0);
    let mut rhs = ComplexNeumaier::default();
    let mut terms = 0usize;
    let mut mass = 0.0;
    let mut current_den = 0u64;
    let mut coeff = 0.0;
    // F(|b| / D) depends only on |b|^2 within one denominator
    let mut cache: Vec<f64> = Vec::new();
    for_each_frequency(&table, d, n, xi_cutoff, |den, b| {
        if den != current_den {
            current_den = den;
            coeff = prim_coefficient(&table, d, n, den);
            let top = (xi_cutoff * den as f64).powi(2).floor() as usize + 1;
            cache = vec![f64::NAN; top + 1];
            mass += coeff.abs() * ball_volume(d, 2.0 * xi_cutoff * den as f64);
        }
        if coeff == 0.0 {
            return;
        }
        let m2 = b.iter().map(|v| v * v).sum::<i64>() as usize;
        if cache[m2].is_nan() {
            cache[m2] = ft.radial((m2 as f64).sqrt() / den as f64);
        }
        let value = if centered {
            Complex64::new(cache[m2], 0.0)
        } else {
            let phase: f64 = center.iter().zip(b).map(|(c, &v)| c * v as f64).sum::<f64>() / den as f64;
            Complex64::from_polar(cache[m2], -2.0 * PI * phase)
        };
        rhs.add(value * coeff);
        terms += 1;
    });
    let rhs = rhs.value().re - mertens as f64 * f.eval(&vec![0.0; d]);
    Ok(PrimPoissonCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).abs(),
        mertens,
        tail_estimate: ft.radial(xi_cutoff).abs() * mass,
        terms,
    })
}

/// Primitive points of `Z^d` weighted by `e^{2πi<z,η>}` for rational `η`.
///
/// Phases are reduced exactly modulo `n(η)` and read from a table of roots
/// of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedSource {
    prim: PrimitivePoints,
    eta: Vec<Ratio<i64>>,
    modulus: i64,
    scaled: Vec<i64>,
    roots: Vec<Complex64>,
}

impl TwistedSource {
    pub fn new(eta: Vec<Ratio<i64>>) -> Result<Self> {
        check_dim(eta.len())?;
        let modulus = n_of_xi(&eta) as i64;
        if modulus > 1 << 24 {
            return Err(Error::invalid("eta", "denominators too large"));
        }
        let scaled = eta.iter().map(|r| r.numer() * (modulus / r.denom())).collect();
        let roots = (0..modulus).map(|m| root_of_unity(m, modulus)).collect();
        Ok(Self {
            prim: PrimitivePoints::new(PrimitiveSetKind::Prim(eta.len()))?,
            eta,
            modulus,
            scaled,
            roots,
        })
    }

    pub fn eta(&self) -> &[Ratio<i64>] {
        &self.eta
    }

    pub fn weight(&self, z: &[i64]) -> Complex64 {
        let m = z
            .iter()
            .zip(&self.scaled)
            .fold(0i64, |acc, (&a, &b)| (acc + (a % self.modulus) * b).rem_euclid(self.modulus));
        self.roots[m as usize]
    }
}

/// `e^{2πi m/n}`, exact at multiples of a quarter turn.
fn root_of_unity(m: i64, n: i64) -> Complex64 {
    if (4 * m) % n == 0 {
        return match (4 * m / n) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)
}

impl PointSource for TwistedSource {
    fn dimension(&self) -> usize {
        self.eta.len()
    }

    fn descriptor(&self) -> String {
        let eta: Vec<String> = self.eta.iter().map(|r| r.to_string()).collect();
        format!("prim{}-twisted({})", self.eta.len(), eta.join(","))
    }

    fn for_each_within(&self, radius: f64, visit: &mut dyn FnMut(&[f64], Complex64)) -> Result<()> {
        let mut x = vec![0.0; self.eta.len()];
        self.prim.for_each_integer(radius, |z| {
            for (xi, &zi) in x.iter_mut().zip(z) {
                *xi = zi as f64;
            }
            visit(&x, self.weight(z));
        });
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistedDensity {
    pub estimate: DensityEstimate,
    pub n_eta: u64,
    pub a_limit: f64,
}

/// Density of the primitive points weighted by `e^{2πi<z,η>}`, next to its
/// predicted value `a(η)`. Rejects `η` with `μ(n(η)) = 0`, where no limit is
/// predicted.
pub fn twisted_density_check(eta: Vec<Ratio<i64>>, f: &TestFunction, eps_schedule: &[f64]) -> Result<TwistedDensity> {
    let d = eta.len();
    check_dim(d)?;
    let n_eta = n_of_xi(&eta);
    let table = mobius_sieve(n_eta as usize)?;
    if table.mu(n_eta as usize) == 0 {
        return Err(Error::invalid(
            "eta",
            format!("n(eta) = {n_eta} is not squarefree, so no limit is predicted"),
        ));
    }
    let src = TwistedSource::new(eta)?;
    let estimate = estimate_density(f, &src, eps_schedule)?;
    Ok(TwistedDensity {
        estimate,
        n_eta,
        a_limit: prim_coefficient_limit(d, n_eta)?,
    })
}
