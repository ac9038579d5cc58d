use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::riemann::{ball_volume, Shape, TestFunction};
use crate::summation::Neumaier;

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.nodes.len());
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                out.push((mid + 0.5 * h * x, 0.5 * h * w));
            }
        }
        out
    }

    pub fn integrate(&self, a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
        self.composite(a, b, panels)
            .into_iter()
            .map(|(x, w)| w * f(x))
            .collect::<Neumaier>()
            .value()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

const NODES_PER_PANEL: usize = 20;
const MAX_OUTER_PANELS: usize = 1 << 13;
const MAX_INNER_PANELS: usize = 256;

/// Fourier transform of the smooth bump `exp(-1 / (1 - |x - c|^2 / ρ^2))`.
///
/// The transform is radial about the centre: `f^(ξ) = e^{-2πi<c,ξ>} F(|ξ|)`
/// with `F(k) = 2 ∫_0^ρ P(s) cos(2πks) ds`, where `P` integrates the bump over
/// the hyperplanes orthogonal to `ξ`. Both integrals use composite
/// Gauss-Legendre rules whose panel counts are doubled until the values at a
/// set of probe frequencies up to `k_max` stop changing.
#[derive(Debug, Clone)]
pub struct BumpTransform {
    dim: usize,
    center: Vec<f64>,
    radius: f64,
    k_max: f64,
    samples: Vec<(f64, f64)>,
    integral: f64,
}

impl BumpTransform {
    /// Transform of a bump test function, accurate for `|ξ| <= k_max`.
    pub fn new(f: &TestFunction, k_max: f64) -> Result<Self> {
        match f.shape() {
            Shape::Bump { center, radius } => Self::with_params(center.clone(), *radius, k_max),
            _ => Err(Error::Unsupported("quadrature transform needs a smooth bump".into())),
        }
    }

    pub fn with_params(center: Vec<f64>, radius: f64, k_max: f64) -> Result<Self> {
        let dim = center.len();
        if dim == 0 {
            return Err(Error::invalid("center", "dimension must be at least 1"));
        }
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::invalid("radius", "radius must be finite and non-negative"));
        }
        if !(k_max >= 0.0 && k_max.is_finite()) {
            return Err(Error::invalid("k_max", "frequency bound must be finite and non-negative"));
        }
        let mut me = Self {
            dim,
            center,
            radius,
            k_max,
            samples: Vec::new(),
            integral: 0.0,
        };
        if radius == 0.0 {
            return Ok(me);
        }
        let rule = GaussLegendre::new(NODES_PER_PANEL);
        let probes: Vec<f64> = (0..=8).map(|i| k_max * i as f64 / 8.0).collect();
        let mut outer = ((2.0 * PI * k_max * radius / 6.0).ceil() as usize).max(8);
        let mut inner = 8usize;
        let mut current = build_samples(&rule, dim, radius, outer, inner);
        while outer < MAX_OUTER_PANELS {
            outer *= 2;
            if dim >= 2 {
                inner = (inner * 2).min(MAX_INNER_PANELS);
            }
            let finer = build_samples(&rule, dim, radius, outer, inner);
            let scale = radial(&finer, 0.0).abs();
            let diff = probes
                .iter()
                .map(|&k| (radial(&current, k) - radial(&finer, k)).abs())
                .fold(0.0, f64::max);
            if diff <= 1e-14 * scale {
                // the coarser rule already agrees with its refinement
                break;
            }
            current = finer;
        }
        let prev = current;
        me.integral = radial(&prev, 0.0);
        me.samples = prev;
        Ok(me)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    /// `∫ f`.
    pub fn integral(&self) -> f64 {
        self.integral
    }

    /// The radial profile `F(k)`.
    pub fn radial(&self, k: f64) -> f64 {
        radial(&self.samples, k)
    }

    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        let k = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let phase: f64 = self.center.iter().zip(xi).map(|(c, x)| c * x).sum();
        Complex64::from_polar(self.radial(k), -2.0 * PI * phase)
    }
}

fn radial(samples: &[(f64, f64)], k: f64) -> f64 {
    samples
        .iter()
        .map(|&(s, c)| c * (2.0 * PI * k * s).cos())
        .collect::<Neumaier>()
        .value()
}

fn bump_profile(u: f64) -> f64 {
    if u < 1.0 {
        (-1.0 / (1.0 - u)).exp()
    } else {
        0.0
    }
}

/// Nodes `s` in `(0, ρ)` with coefficients `2 w P(s)`.
fn build_samples(rule: &GaussLegendre, dim: usize, radius: f64, outer: usize, inner: usize) -> Vec<(f64, f64)> {
    let r2 = radius * radius;
    // surface area of the unit sphere in R^{d-1}
    let sphere = if dim >= 2 {
        (dim - 1) as f64 * ball_volume(dim - 1, 1.0)
    } else {
        0.0
    };
    rule.composite(0.0, radius, outer)
        .into_par_iter()
        .map(|(s, w)| {
            let p = if dim == 1 {
                bump_profile(s * s / r2)
            } else {
                let a = (r2 - s * s).max(0.0).sqrt();
                sphere
                    * rule.integrate(0.0, a, inner, |r| {
                        r.powi(dim as i32 - 2) * bump_profile((s * s + r * r) / r2)
                    })
            };
            (s, 2.0 * w * p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = GaussLegendre::new(10);
        let w: f64 = rule.weights().iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
        // degree 19 is integrated exactly
        let v = rule.integrate(0.0, 1.0, 1, |x| x.powi(19));
        assert!((v - 0.05).abs() < 1e-15);
    }

    #[test]
    fn composite_rule_on_oscillatory_integrand() {
        let rule = GaussLegendre::new(20);
        let v = rule.integrate(0.0, PI, 8, |x| (10.0 * x).sin().powi(2));
        assert!((v - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn one_dimensional_transform_matches_direct_quadrature() {
        let t = BumpTransform::with_params(vec![0.5], 2.0, 4.0).unwrap();
        let rule = GaussLegendre::new(40);
        for k in [0.0, 0.3, 1.7, 4.0] {
            // oracle: integrate f(x) e^{-2πikx} directly over the support
            let re = rule.integrate(-1.5, 2.5, 64, |x| {
                bump_profile(((x - 0.5) / 2.0).powi(2)) * (2.0 * PI * k * x).cos()
            });
            let im = rule.integrate(-1.5, 2.5, 64, |x| {
                -bump_profile(((x - 0.5) / 2.0).powi(2)) * (2.0 * PI * k * x).sin()
            });
            let got = t.eval(&[k]);
            assert!((got.re - re).abs() < 1e-12, "k = {k}");
            assert!((got.im - im).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn two_dimensional_transform_matches_tensor_quadrature() {
        let t = BumpTransform::with_params(vec![0.0, 0.0], 1.0, 3.0).unwrap();
        let rule = GaussLegendre::new(20);
        let xi = [1.2, -0.9];
        // oracle: tensor rule over the bounding square
        let pts = rule.composite(-1.0, 1.0, 24);
        let mut acc = Neumaier::default();
        for &(x, wx) in &pts {
            for &(y, wy) in &pts {
                let f = bump_profile(x * x + y * y);
                acc.add(wx * wy * f * (2.0 * PI * (x * xi[0] + y * xi[1])).cos());
            }
        }
        assert!((t.eval(&xi).re - acc.value()).abs() < 1e-10);
        assert!(t.eval(&xi).im.abs() < 1e-15);
    }

    #[test]
    fn integral_matches_partition_sum() {
        let f = TestFunction::bump(vec![0.0, 0.0], 1.0).unwrap();
        let t = BumpTransform::new(&f, 1.0).unwrap();
        let p = crate::riemann::partition_riemann_sum(&f, 1.0 / 512.0, crate::riemann::SampleMode::Center)
            .unwrap();
        assert!((t.integral() - p).abs() < 1e-6);
    }

    #[test]
    fn non_bump_rejected() {
        let f = TestFunction::ball(vec![0.0], 1.0).unwrap();
        assert!(matches!(BumpTransform::new(&f, 1.0), Err(Error::Unsupported(_))));
    }
}
