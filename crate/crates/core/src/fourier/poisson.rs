use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::lattice::Lattice;
use crate::error::{Error, Result};
use crate::summation::ComplexNeumaier;

/// `f(x) = exp(-π t |x|^2)` with `f^(ξ) = t^{-d/2} exp(-π |ξ|^2 / t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    dim: usize,
    t: f64,
}

/// Gaussian tails are cut where the exponent drops below `-TAIL_EXPONENT`.
const TAIL_EXPONENT: f64 = 40.0;

impl Gaussian {
    pub fn new(dim: usize, t: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "dimension must be at least 1"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid("t", "width parameter must be positive"));
        }
        Ok(Self { dim, t })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (-PI * self.t * norm2(x)).exp()
    }

    pub fn ft(&self, xi: &[f64]) -> f64 {
        self.t.powf(-(self.dim as f64) / 2.0) * (-PI * norm2(xi) / self.t).exp()
    }

    /// Radius beyond which `f < e^{-40}`.
    pub fn direct_radius(&self) -> f64 {
        (TAIL_EXPONENT / (PI * self.t)).sqrt()
    }

    /// Radius beyond which `f^ < t^{-d/2} e^{-40}`.
    pub fn dual_radius(&self) -> f64 {
        (TAIL_EXPONENT * self.t / PI).sqrt()
    }
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
}

/// Compares `Σ_{z∈L} f(z) e^{2πi<z,η>}` with `covol^{-1} Σ_{ξ∈L*} f^(ξ - η)`.
///
/// The direct sum runs over `|z| <= r_direct` and the dual sum over
/// `|ξ - η| <= r_dual`.
pub fn poisson_check(
    f: &Gaussian,
    lattice: &Lattice,
    eta: &[f64],
    r_direct: f64,
    r_dual: f64,
) -> Result<PoissonCheck> {
    let d = lattice.dimension();
    if f.dimension() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.dimension(),
        });
    }
    if eta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: eta.len(),
        });
    }
    if !(r_direct >= 0.0 && r_dual >= 0.0) {
        return Err(Error::invalid("radius", "truncation radii must be non-negative"));
    }
    let mut lhs = ComplexNeumaier::default();
    for z in lattice.points_within(r_direct) {
        let phase: f64 = z.iter().zip(eta).map(|(a, b)| a * b).sum();
        lhs.add(Complex64::from_polar(f.eval(&z), 2.0 * PI * phase));
    }
    let dual = lattice.dual()?;
    let eta_norm = norm2(eta).sqrt();
    let mut rhs = ComplexNeumaier::default();
    let r2 = r_dual * r_dual;
    for xi in dual.points_within(r_dual + eta_norm) {
        let shifted: Vec<f64> = xi.iter().zip(eta).map(|(a, b)| a - b).collect();
        if norm2(&shifted) <= r2 {
            rhs.add(Complex64::new(f.ft(&shifted), 0.0));
        }
    }
    let lhs = lhs.value();
    let rhs = rhs.value() / lattice.covolume();
    Ok(PoissonCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
    })
}

/// [`poisson_check`] with radii that make both Gaussian tails negligible.
pub fn poisson_check_auto(f: &Gaussian, lattice: &Lattice, eta: &[f64]) -> Result<PoissonCheck> {
    poisson_check(f, lattice, eta, f.direct_radius(), f.dual_radius())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_value() {
        let g = Gaussian::new(1, 1.0).unwrap();
        let z = Lattice::integer(1).unwrap();
        let r = poisson_check_auto(&g, &z, &[0.0]).unwrap();
        // oracle: direct series for theta(1)
        let direct: f64 = (-10i32..=10).map(|n| (-PI * (n * n) as f64).exp()).sum();
        assert!((r.lhs.re - direct).abs() < 1e-15);
        assert!((r.lhs.re - 1.086434811213308).abs() < 1e-14);
        assert!(r.abs_err < 1e-10);
    }

    #[test]
    fn integer_shift_is_trivial() {
        let g = Gaussian::new(2, 0.7).unwrap();
        let z = Lattice::integer(2).unwrap();
        let a = poisson_check_auto(&g, &z, &[0.0, 0.0]).unwrap();
        let b = poisson_check_auto(&g, &z, &[2.0, -1.0]).unwrap();
        assert!((a.lhs - b.lhs).norm() < 1e-13);
        assert!((a.rhs - b.rhs).norm() < 1e-13);
    }

    #[test]
    fn functional_equation_t4() {
        let g = Gaussian::new(1, 4.0).unwrap();
        let r = poisson_check_auto(&g, &Lattice::integer(1).unwrap(), &[0.0]).unwrap();
        assert!(r.abs_err < 1e-10);
        // theta(4) = theta(1/4)/2
        let quarter: f64 = (-40i32..=40).map(|n| (-PI * (n * n) as f64 / 4.0).exp()).sum();
        assert!((r.lhs.re - quarter / 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Gaussian::new(0, 1.0).is_err());
        assert!(Gaussian::new(1, 0.0).is_err());
        let g = Gaussian::new(2, 1.0).unwrap();
        assert!(poisson_check_auto(&g, &Lattice::integer(1).unwrap(), &[0.0]).is_err());
    }
}
