use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Anything that can be summed over a point source.
///
/// `support_radius` bounds the support about the origin: `eval` vanishes
/// outside the closed ball of that radius centred at `0`.
pub trait Integrand: Sync {
    fn dimension(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
    fn support_radius(&self) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Indicator of the closed box `lo <= x <= hi`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Indicator of the closed ball `|x - center| <= radius`.
    Ball { center: Vec<f64>, radius: f64 },
    /// Indicator of `{x, y > 0, alpha x <= y <= beta x, x^2 + y^2 <= radius^2}`.
    Sector { alpha: f64, beta: f64, radius: f64 },
    /// `exp(-1 / (1 - |x - center|^2 / radius^2))` on the open ball, zero outside.
    Bump { center: Vec<f64>, radius: f64 },
}

/// A compactly supported test function with known geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    shape: Shape,
}

fn check_finite(name: &'static str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::invalid(name, "dimension must be at least 1"));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(name, "coordinates must be finite"));
    }
    Ok(())
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::invalid("radius", "radius must be finite and nonnegative"));
    }
    Ok(())
}

impl TestFunction {
    pub fn box_indicator(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_finite("lo", &lo)?;
        check_finite("hi", &hi)?;
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::invalid("hi", "each upper bound must be >= its lower bound"));
        }
        Ok(Self {
            shape: Shape::Box { lo, hi },
        })
    }

    /// The unit cube `[0, 1]^d`.
    pub fn unit_cube(dim: usize) -> Result<Self> {
        Self::box_indicator(vec![0.0; dim], vec![1.0; dim])
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_finite("center", &center)?;
        check_radius(radius)?;
        Ok(Self {
            shape: Shape::Ball { center, radius },
        })
    }

    pub fn sector(alpha: f64, beta: f64, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        if !(alpha >= 0.0) || !(alpha < beta) || !beta.is_finite() {
            return Err(Error::invalid("alpha", "need 0 <= alpha < beta"));
        }
        Ok(Self {
            shape: Shape::Sector {
                alpha,
                beta,
                radius,
            },
        })
    }

    pub fn bump(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_finite("center", &center)?;
        check_radius(radius)?;
        Ok(Self {
            shape: Shape::Bump { center, radius },
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dimension(&self) -> usize {
        match &self.shape {
            Shape::Box { lo, .. } => lo.len(),
            Shape::Ball { center, .. } | Shape::Bump { center, .. } => center.len(),
            Shape::Sector { .. } => 2,
        }
    }

    /// Centre of the shape; the sector's apex is the origin.
    pub fn center(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect(),
            Shape::Ball { center, .. } | Shape::Bump { center, .. } => center.clone(),
            Shape::Sector { .. } => vec![0.0, 0.0],
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Box { lo, hi } => {
                let inside = x
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .all(|(&v, (&a, &b))| a <= v && v <= b);
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::Ball { center, radius } => {
                if dist2(x, center) <= radius * radius {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::Sector {
                alpha,
                beta,
                radius,
            } => {
                let (u, v) = (x[0], x[1]);
                let inside = u > 0.0
                    && v > 0.0
                    && alpha * u <= v
                    && v <= beta * u
                    && u * u + v * v <= radius * radius;
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::Bump { center, radius } => {
                if *radius == 0.0 {
                    return 0.0;
                }
                let s = dist2(x, center) / (radius * radius);
                if s < 1.0 {
                    (-1.0 / (1.0 - s)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// Radius of the smallest origin-centred ball containing the support.
    pub fn support_radius(&self) -> f64 {
        match &self.shape {
            Shape::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| a.abs().max(b.abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            Shape::Ball { center, radius } | Shape::Bump { center, radius } => {
                norm(center) + radius
            }
            Shape::Sector { radius, .. } => *radius,
        }
    }

    /// Axis-aligned bounding box of the support, as `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.shape {
            Shape::Box { lo, hi } => (lo.clone(), hi.clone()),
            Shape::Ball { center, radius } | Shape::Bump { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Shape::Sector { radius, .. } => (vec![0.0, 0.0], vec![*radius, *radius]),
        }
    }

    pub fn exact_integral(&self) -> Option<f64> {
        match &self.shape {
            Shape::Box { lo, hi } => Some(lo.iter().zip(hi).map(|(a, b)| b - a).product()),
            Shape::Ball { center, radius } => Some(ball_volume(center.len(), *radius)),
            Shape::Sector {
                alpha,
                beta,
                radius,
            } => Some(sector_area(*alpha, *beta, *radius)),
            Shape::Bump { .. } => None,
        }
    }

    /// Closed-form Fourier transform `∫ f(x) e^{-2πi<x,ξ>} dx`, where one is known.
    pub fn exact_ft(&self, xi: &[f64]) -> Option<Complex64> {
        match &self.shape {
            Shape::Box { lo, hi } => Some(
                lo.iter()
                    .zip(hi)
                    .zip(xi)
                    .map(|((&a, &b), &k)| interval_ft(a, b, k))
                    .product(),
            ),
            Shape::Ball { center, radius } if center.len() == 1 => {
                Some(interval_ft(center[0] - radius, center[0] + radius, xi[0]))
            }
            _ => None,
        }
    }
}

impl Integrand for TestFunction {
    fn dimension(&self) -> usize {
        TestFunction::dimension(self)
    }

    fn eval(&self, x: &[f64]) -> f64 {
        TestFunction::eval(self, x)
    }

    fn support_radius(&self) -> f64 {
        TestFunction::support_radius(self)
    }
}

/// A finite real linear combination of test functions of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCombination {
    dim: usize,
    terms: Vec<(f64, TestFunction)>,
}

impl LinearCombination {
    pub fn new(terms: Vec<(f64, TestFunction)>) -> Result<Self> {
        let dim = terms
            .first()
            .map(|(_, f)| f.dimension())
            .ok_or_else(|| Error::invalid("terms", "need at least one term"))?;
        if let Some((_, f)) = terms.iter().find(|(_, f)| f.dimension() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: f.dimension(),
            });
        }
        Ok(Self { dim, terms })
    }
}

impl Integrand for LinearCombination {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.eval(x)).sum()
    }

    fn support_radius(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, f)| f.support_radius())
            .fold(0.0, f64::max)
    }
}

/// `∫_a^b e^{-2πixk} dx`.
pub fn interval_ft(a: f64, b: f64, k: f64) -> Complex64 {
    let w = b - a;
    if k == 0.0 {
        return Complex64::new(w, 0.0);
    }
    let c = 0.5 * (a + b);
    let envelope = (PI * w * k).sin() / (PI * k);
    Complex64::from_polar(1.0, -2.0 * PI * c * k) * envelope
}

/// Volume of the `d`-ball of the given radius.
pub fn ball_volume(dim: usize, radius: f64) -> f64 {
    // V_d = 2π/d V_{d-2}
    let mut v = if dim % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if dim % 2 == 0 { 2 } else { 3 };
    while k <= dim {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v * radius.powi(dim as i32)
}

/// Area of `{x, y > 0, alpha x <= y <= beta x, x^2 + y^2 <= r^2}`.
pub fn sector_area(alpha: f64, beta: f64, radius: f64) -> f64 {
    0.5 * radius * radius * ((beta - alpha) / (1.0 + alpha * beta)).atan()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}
