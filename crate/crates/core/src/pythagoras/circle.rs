use std::f64::consts::{PI, TAU};

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use super::triples::{enumerate_ppt, PPTriple};
use crate::arith::mobius_sieve;
use crate::error::{Error, Result};

/// A rational point `(p, q)` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RationalCirclePoint {
    #[serde(serialize_with = "ser_ratio")]
    pub p: Ratio<i64>,
    #[serde(serialize_with = "ser_ratio")]
    pub q: Ratio<i64>,
    pub height: u64,
    pub angle: f64,
}

fn ser_ratio<S: serde::Serializer>(
    r: &Ratio<i64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl RationalCirclePoint {
    pub fn new(p: Ratio<i64>, q: Ratio<i64>) -> Result<Self> {
        let sq = |r: &Ratio<i64>| Ratio::new(*r.numer() as i128 * *r.numer() as i128, *r.denom() as i128 * *r.denom() as i128);
        if sq(&p) + sq(&q) != Ratio::from_integer(1) {
            return Err(Error::invalid("p", format!("({p}, {q}) is not on the unit circle")));
        }
        // the least h clearing both denominators
        let height = p.denom().lcm(q.denom()) as u64;
        let angle = exact_angle(*p.numer() * (height as i64 / p.denom()), *q.numer() * (height as i64 / q.denom()));
        Ok(Self { p, q, height, angle })
    }

    fn from_numerators(a: i64, b: i64, h: i64) -> Self {
        Self {
            p: Ratio::new(a, h),
            q: Ratio::new(b, h),
            height: h as u64,
            angle: exact_angle(a, b),
        }
    }
}

/// Angle of the integer vector `(a, b)` in `[0, 2 pi)`.
///
/// The quadrant comes from the exact signs; axis points map to exact
/// multiples of `pi/2`.
pub fn exact_angle(a: i64, b: i64) -> f64 {
    match (a.signum(), b.signum()) {
        (1, 0) => 0.0,
        (0, 1) => PI / 2.0,
        (-1, 0) => PI,
        (0, -1) => 1.5 * PI,
        (_, -1) => {
            let t = (b as f64).atan2(a as f64) + TAU;
            // atan2 of a tiny negative b can round to exactly 2 pi
            if t >= TAU {
                TAU.next_down_compat()
            } else {
                t
            }
        }
        _ => (b as f64).atan2(a as f64),
    }
}

trait NextDown {
    fn next_down_compat(self) -> f64;
}

impl NextDown for f64 {
    fn next_down_compat(self) -> f64 {
        f64::from_bits(self.to_bits() - 1)
    }
}

const TRIVIAL: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn signed_images(t: &PPTriple) -> [(i64, i64); 8] {
    let (x, y) = (t.x as i64, t.y as i64);
    [
        (x, y),
        (-x, y),
        (x, -y),
        (-x, -y),
        (y, x),
        (-y, x),
        (y, -x),
        (-y, -x),
    ]
}

fn for_each_point(h_max: u64, mut visit: impl FnMut(i64, i64, i64)) {
    for (a, b) in TRIVIAL {
        visit(a, b, 1);
    }
    for t in enumerate_ppt(h_max) {
        for (a, b) in signed_images(&t) {
            visit(a, b, t.z as i64);
        }
    }
}

/// All points of height at most `h_max`, ordered by height and then angle.
pub fn rational_circle_points(h_max: u64) -> Result<Vec<RationalCirclePoint>> {
    if h_max < 1 {
        return Err(Error::invalid("h_max", "h_max must be at least 1"));
    }
    let mut out = Vec::new();
    for_each_point(h_max, |a, b, h| out.push(RationalCirclePoint::from_numerators(a, b, h)));
    out.sort_by(|u, v| u.height.cmp(&v.height).then(u.angle.total_cmp(&v.angle)));
    Ok(out)
}

/// Point counts split by the parity of the numerator of `p`.
pub fn parity_split(h_max: u64) -> Result<(u64, u64)> {
    if h_max < 1 {
        return Err(Error::invalid("h_max", "h_max must be at least 1"));
    }
    let (mut odd, mut even) = (0, 0);
    for_each_point(h_max, |a, _, _| {
        if a % 2 == 0 {
            even += 1;
        } else {
            odd += 1;
        }
    });
    Ok((odd, even))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquidistributionStat {
    pub count: u64,
    pub total: u64,
    pub ratio: f64,
    pub expected: f64,
}

/// Counts points of height at most `h_max` with angle in `[theta1, theta2)`.
pub fn equidistribution_stat(theta1: f64, theta2: f64, h_max: u64) -> Result<EquidistributionStat> {
    if !(theta1.is_finite() && theta2.is_finite() && 0.0 <= theta1 && theta1 < theta2 && theta2 <= TAU) {
        return Err(Error::invalid(
            "theta",
            format!("need 0 <= theta1 < theta2 <= 2 pi, got [{theta1}, {theta2})"),
        ));
    }
    if h_max < 1 {
        return Err(Error::invalid("h_max", "h_max must be at least 1"));
    }
    let (mut count, mut total) = (0u64, 0u64);
    for_each_point(h_max, |a, b, _| {
        total += 1;
        let t = exact_angle(a, b);
        if theta1 <= t && t < theta2 {
            count += 1;
        }
    });
    Ok(EquidistributionStat {
        count,
        total,
        ratio: count as f64 / total as f64,
        expected: (theta2 - theta1) / TAU,
    })
}

/// Asymptotic count `2 |A| h / pi^2` of points in an arc of length `|A|`.
pub fn expected_arc_count(arc_length: f64, h_max: u64) -> f64 {
    2.0 * arc_length / (PI * PI) * h_max as f64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FermatMismatch {
    pub z: u64,
    pub expected: u64,
    pub observed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FermatReport {
    pub consistent: bool,
    pub checked: u64,
    pub mismatches: Vec<FermatMismatch>,
}

/// Predicted number of triples with hypotenuse `z`: `2^(nu - 1)` when every
/// prime factor is `1 mod 4`, else zero.
pub fn predicted_multiplicity(factors: &[(u64, u32)]) -> u64 {
    if factors.is_empty() || factors.iter().any(|&(p, _)| p % 4 != 1) {
        return 0;
    }
    1 << (factors.len() - 1)
}

/// Compares hypotenuse multiplicities with the prime-factor prediction for odd `z <= z_max`.
pub fn fermat_characterization_check(z_max: u64) -> Result<FermatReport> {
    if z_max < 5 {
        return Err(Error::invalid("z_max", "z_max must be at least 5"));
    }
    let table = mobius_sieve(z_max as usize)?;
    let mut observed = vec![0u64; z_max as usize + 1];
    for t in enumerate_ppt(z_max) {
        observed[t.z as usize] += 1;
    }
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for z in (1..=z_max).step_by(2) {
        checked += 1;
        let expected = predicted_multiplicity(&table.factorize(z as usize));
        let seen = observed[z as usize];
        if expected != seen {
            mismatches.push(FermatMismatch { z, expected, observed: seen });
        }
    }
    Ok(FermatReport {
        consistent: mismatches.is_empty(),
        checked,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_heights() {
        assert_eq!(rational_circle_points(1).unwrap().len(), 4);
        assert_eq!(rational_circle_points(4).unwrap().len(), 4);
        let pts = rational_circle_points(5).unwrap();
        assert_eq!(pts.len(), 12);
        assert!(pts.iter().all(|p| p.p * p.p + p.q * p.q == Ratio::from_integer(1)));
    }

    #[test]
    fn new_computes_height() {
        let pt = RationalCirclePoint::new(Ratio::new(-3, 5), Ratio::new(4, 5)).unwrap();
        assert_eq!(pt.height, 5);
        assert!((pt.angle - (4f64).atan2(-3.0)).abs() < 1e-15);
        let pt = RationalCirclePoint::new(Ratio::new(0, 1), Ratio::new(-1, 1)).unwrap();
        assert_eq!(pt.height, 1);
        assert_eq!(pt.angle, 1.5 * PI);
        assert!(RationalCirclePoint::new(Ratio::new(1, 2), Ratio::new(1, 2)).is_err());
    }

    #[test]
    fn angles_in_range() {
        for p in rational_circle_points(2000).unwrap() {
            assert!((0.0..TAU).contains(&p.angle));
        }
    }

    #[test]
    fn full_circle_ratio_is_one() {
        let s = equidistribution_stat(0.0, TAU, 1000).unwrap();
        assert_eq!(s.count, s.total);
        assert_eq!(s.ratio, 1.0);
        assert_eq!(s.expected, 1.0);
    }

    #[test]
    fn half_open_arcs_partition_the_circle() {
        let h = 3000;
        let cuts = [0.0, 0.3, PI / 2.0, 2.0, PI, 1.5 * PI, TAU];
        let total: u64 = cuts
            .windows(2)
            .map(|w| equidistribution_stat(w[0], w[1], h).unwrap().count)
            .sum();
        assert_eq!(total, rational_circle_points(h).unwrap().len() as u64);
    }

    #[test]
    fn multiplicity_prediction() {
        assert_eq!(predicted_multiplicity(&[(5, 1), (13, 1)]), 2);
        assert_eq!(predicted_multiplicity(&[(5, 2), (13, 1), (29, 1)]), 4);
        assert_eq!(predicted_multiplicity(&[(3, 2)]), 0);
        assert_eq!(predicted_multiplicity(&[]), 0);
    }

    #[test]
    fn fermat_small() {
        let r = fermat_characterization_check(2000).unwrap();
        assert!(r.consistent, "{:?}", r.mismatches);
        assert_eq!(r.checked, 1000);
        assert!(fermat_characterization_check(4).is_err());
    }
}
