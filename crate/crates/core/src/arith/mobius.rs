use crate::error::{Error, Result};
use crate::summation::Neumaier;

/// Möbius values `μ(1..=K)` from a linear sieve, with smallest prime factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    mu: Vec<i8>,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// Linear sieve for `μ` on `1..=limit`.
pub fn mobius_sieve(limit: usize) -> Result<MobiusTable> {
    if limit == 0 {
        return Err(Error::invalid("limit", "sieve limit must be at least 1"));
    }
    if limit > u32::MAX as usize {
        return Err(Error::invalid("limit", "sieve limit too large"));
    }
    let mut mu = vec![0i8; limit + 1];
    let mut spf = vec![0u32; limit + 1];
    let mut primes = Vec::new();
    mu[1] = 1;
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            mu[i] = -1;
            primes.push(i as u32);
        }
        for &p in &primes {
            let p = p as usize;
            let ip = i * p;
            if p > spf[i] as usize || ip > limit {
                break;
            }
            spf[ip] = p as u32;
            mu[ip] = if p == spf[i] as usize { 0 } else { -mu[i] };
        }
    }
    Ok(MobiusTable { mu, spf, primes })
}

impl MobiusTable {
    pub fn limit(&self) -> usize {
        self.mu.len() - 1
    }

    /// `μ(k)` for `1 <= k <= limit`.
    pub fn mu(&self, k: usize) -> i8 {
        assert!(k >= 1 && k <= self.limit(), "k = {k} outside 1..={}", self.limit());
        self.mu[k]
    }

    /// `μ(1), ..., μ(limit)`.
    pub fn values(&self) -> &[i8] {
        &self.mu[1..]
    }

    /// Mertens function `M(n) = Σ_{k<=n} μ(k)`.
    pub fn mertens(&self, n: usize) -> i64 {
        self.mu[1..=n.min(self.limit())].iter().map(|&m| m as i64).sum()
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_squarefree(&self, k: usize) -> bool {
        self.mu(k) != 0
    }

    /// Prime factorisation `[(p, e)]` of `1 <= n <= limit`, primes ascending.
    pub fn factorize(&self, mut n: usize) -> Vec<(u64, u32)> {
        assert!(n >= 1 && n <= self.limit());
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    /// Partial sum `Σ_{k<=limit} μ(k) k^{-s}`.
    pub fn dirichlet_partial_sum(&self, s: i32) -> f64 {
        // small terms first
        (1..=self.limit())
            .rev()
            .filter(|&k| self.mu[k] != 0)
            .map(|k| self.mu[k] as f64 * (k as f64).powi(-s))
            .collect::<Neumaier>()
            .value()
    }
}

/// `ζ(d)` to absolute accuracy `tol`.
///
/// Sums `n` terms and adds the midpoint of the integral enclosure
/// `∫_{n+1}^∞ x^{-d} <= tail <= ∫_n^∞ x^{-d}`, choosing `n` so that the
/// enclosure half-width is below `tol`.
pub fn zeta(d: u32, tol: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::invalid("d", "zeta(d) diverges for d < 2"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "tolerance must be positive"));
    }
    let s = d as i32;
    let half_width = |n: f64| ((n).powi(1 - s) - (n + 1.0).powi(1 - s)) / (2.0 * (s - 1) as f64);
    // half-width < n^{-d} / 2
    let mut n = (1.0 / (2.0 * tol)).powf(1.0 / d as f64).ceil().max(1.0);
    while half_width(n) >= tol {
        n += 1.0;
    }
    let n_terms = n as u64;
    let partial = (1..=n_terms)
        .rev()
        .map(|k| (k as f64).powi(-s))
        .collect::<Neumaier>()
        .value();
    let lower = (n + 1.0).powi(1 - s) / (s - 1) as f64;
    let upper = n.powi(1 - s) / (s - 1) as f64;
    Ok(partial + 0.5 * (lower + upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn first_six_values() {
        let t = mobius_sieve(6).unwrap();
        assert_eq!(t.values(), &[1, -1, -1, 0, -1, 1]);
    }

    #[test]
    fn zero_limit_rejected() {
        assert!(mobius_sieve(0).is_err());
    }

    #[test]
    fn divisor_sum_is_indicator_of_one() {
        let k = 10_000;
        let t = mobius_sieve(k).unwrap();
        let mut acc = vec![0i64; k + 1];
        for d in 1..=k {
            let m = t.mu(d) as i64;
            for n in (d..=k).step_by(d) {
                acc[n] += m;
            }
        }
        assert_eq!(acc[1], 1);
        assert!(acc[2..].iter().all(|&v| v == 0));
    }

    #[test]
    fn mu_matches_factorisation() {
        let t = mobius_sieve(5000).unwrap();
        for n in 1..=5000 {
            let f = t.factorize(n);
            let expect = if f.iter().any(|&(_, e)| e > 1) {
                0
            } else if f.len() % 2 == 0 {
                1
            } else {
                -1
            };
            assert_eq!(t.mu(n), expect, "n = {n}");
            assert_eq!(f.iter().map(|&(p, e)| p.pow(e) as usize).product::<usize>(), n);
        }
    }

    #[test]
    fn mertens_100() {
        let t = mobius_sieve(100).unwrap();
        assert_eq!(t.mertens(100), 1);
        assert_eq!(t.mertens(1), 1);
        assert_eq!(t.mertens(2), 0);
    }

    #[test]
    fn inverse_zeta_two_from_mobius() {
        let t = mobius_sieve(10_000).unwrap();
        assert!((t.dirichlet_partial_sum(2) - 6.0 / (PI * PI)).abs() < 1e-3);
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2, 1e-10).unwrap() - PI * PI / 6.0).abs() < 1e-10);
        assert!((zeta(4, 1e-10).unwrap() - PI.powi(4) / 90.0).abs() < 1e-10);
        assert!((1.0 / zeta(2, 1e-12).unwrap() - 0.6079271019).abs() < 1e-10);
        // Apéry's constant
        assert!((zeta(3, 1e-12).unwrap() - 1.202_056_903_159_594_3).abs() < 1e-12);
    }

    #[test]
    fn zeta_domain() {
        assert!(zeta(1, 1e-6).is_err());
        assert!(zeta(0, 1e-6).is_err());
        assert!(zeta(2, 0.0).is_err());
    }
}
