use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Euler's totient `φ(0..=n)` from a linear sieve (`φ(0) = 0`).
pub fn totients(n: usize) -> Vec<u64> {
    let mut phi = vec![0u64; n + 1];
    if n >= 1 {
        phi[1] = 1;
    }
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            phi[i] = (i - 1) as u64;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                phi[ip] = phi[i] * p as u64;
                break;
            }
            phi[ip] = phi[i] * (p as u64 - 1);
        }
    }
    phi
}

/// `|{(a, b) : 1 <= a, b <= n, gcd(a, b) = 1}| / n^2`, from `2 Σ φ(b) - 1`.
pub fn coprime_fraction(n: u64) -> Result<Ratio<u64>> {
    if n == 0 {
        return Err(Error::invalid("n", "n must be at least 1"));
    }
    if n > 1 << 31 {
        return Err(Error::invalid("n", "n too large for exact u64 counts"));
    }
    let phi = totients(n as usize);
    let count = 2 * phi.iter().sum::<u64>() - 1;
    Ok(Ratio::new(count, n * n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerangementStats {
    pub n: u32,
    #[serde(serialize_with = "ser_display")]
    pub count: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub probability: BigRational,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Derangement count `D_n = Σ_k (-1)^k n!/k!` from the inclusion-exclusion sum.
pub fn derangement_stats(n: u32) -> DerangementStats {
    let nf = factorial(n);
    let mut count = BigInt::zero();
    // n!/k! built downward from k = n
    let mut term = BigInt::one();
    for k in (0..=n).rev() {
        if k % 2 == 0 {
            count += &term;
        } else {
            count -= &term;
        }
        term *= k.max(1);
    }
    let probability = BigRational::new(count.clone(), nf);
    DerangementStats {
        n,
        count,
        probability,
    }
}

/// Rational enclosure `[lo, hi]` of `1/e` from the alternating series.
pub fn inverse_e_enclosure(terms: u32) -> (BigRational, BigRational) {
    let mut s = BigRational::zero();
    let mut fact = BigInt::one();
    for k in 0..=terms {
        if k > 0 {
            fact *= k;
        }
        let t = BigRational::new(BigInt::one(), fact.clone());
        if k % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    let tail = BigRational::new(BigInt::one(), &fact * (terms + 1));
    (&s - &tail, &s + &tail)
}

/// Exactly decides `|D_n / n! - 1/e| < 1/(n+1)!`.
pub fn derangement_bound_holds(n: u32) -> bool {
    let p = derangement_stats(n).probability;
    let (lo, hi) = inverse_e_enclosure(n + 40);
    // largest possible distance between p and a point of [lo, hi]
    let worst = (&p - &lo).abs().max((&p - &hi).abs());
    let bound = BigRational::new(BigInt::one(), factorial(n + 1));
    worst < bound
}
