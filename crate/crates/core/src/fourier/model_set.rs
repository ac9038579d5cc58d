use std::f64::consts::PI;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use super::quadrature::BumpTransform;
use crate::error::{Error, Result};
use crate::riemann::{interval_ft, lex_cmp, FinitePointSet, PointSource, TestFunction, WeightedPoint};
use crate::summation::{ComplexNeumaier, Neumaier};

/// Distance below which two projected points count as the same point.
const COLLISION_TOL: f64 = 1e-9;

/// A box window `[lo_1, hi_1] x ... x [lo_k, hi_k]` in internal space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::invalid("window", "need matching non-empty bounds"));
        }
        if lo.iter().chain(&hi).any(|v| !v.is_finite()) || lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::invalid("window", "need finite bounds with lo <= hi"));
        }
        Ok(Self { lo, hi })
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        y.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&v, (&a, &b))| a <= v && v <= b)
    }

    /// Sup-norm distance from `y` to the window (zero inside).
    pub fn distance(&self, y: &[f64]) -> f64 {
        y.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&v, (&a, &b))| (a - v).max(v - b).max(0.0))
            .fold(0.0, f64::max)
    }

    /// The window grown by `margin` on every side.
    pub fn enlarged(&self, margin: f64) -> Window {
        Window {
            lo: self.lo.iter().map(|v| v - margin).collect(),
            hi: self.hi.iter().map(|v| v + margin).collect(),
        }
    }

    /// `χ_W^(ξ') = ∫_W e^{-2πi<y,ξ'>} dy`, a product of sinc factors.
    pub fn ft(&self, xi: &[f64]) -> Complex64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(xi)
            .map(|((&a, &b), &k)| interval_ft(a, b, k))
            .product()
    }
}

/// On-disk form: basis rows listed top to bottom, window as `[lo, hi]` per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub total_dim: usize,
    pub physical_dim: usize,
    pub basis: Vec<Vec<f64>>,
    pub window: Vec<[f64; 2]>,
}

/// A lattice in `R^N = R^d x R^{N-d}` with a box window in internal space.
#[derive(Debug, Clone, PartialEq)]
pub struct CutProjectScheme {
    physical_dim: usize,
    lattice: Lattice,
    window: Window,
    density_warning: Option<String>,
}

impl CutProjectScheme {
    pub fn new(lattice: Lattice, physical_dim: usize, window: Window) -> Result<Self> {
        let n = lattice.dimension();
        if physical_dim == 0 || physical_dim >= n {
            return Err(Error::invalid(
                "physical_dim",
                format!("need 1 <= d < N = {n}, got {physical_dim}"),
            ));
        }
        if window.dimension() != n - physical_dim {
            return Err(Error::DimensionMismatch {
                expected: n - physical_dim,
                found: window.dimension(),
            });
        }
        let density_warning = internal_density_warning(&lattice, physical_dim);
        Ok(Self {
            physical_dim,
            lattice,
            window,
            density_warning,
        })
    }

    /// The Fibonacci chain: `Z^2` rotated so the physical line has slope `1/τ`,
    /// with the centred projection of the unit square as window.
    pub fn fibonacci() -> Self {
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        let h = (1.0 + tau * tau).sqrt();
        let (c, s) = (tau / h, 1.0 / h);
        let lattice = Lattice::from_columns(&[vec![c, -s], vec![s, c]]).expect("rotation is well conditioned");
        let w = s + c;
        let window = Window::new(vec![-w / 2.0], vec![w / 2.0]).expect("valid window");
        Self::new(lattice, 1, window).expect("valid scheme")
    }

    pub fn from_file(file: &SchemeFile) -> Result<Self> {
        let n = file.total_dim;
        if file.basis.len() != n || file.basis.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("basis", format!("need an {n}x{n} matrix")));
        }
        if file.physical_dim >= n {
            return Err(Error::invalid("physical_dim", "must be smaller than total_dim"));
        }
        let lattice = Lattice::new(DMatrix::from_fn(n, n, |i, j| file.basis[i][j]))?;
        let window = Window::new(
            file.window.iter().map(|w| w[0]).collect(),
            file.window.iter().map(|w| w[1]).collect(),
        )?;
        Self::new(lattice, file.physical_dim, window)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SchemeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn to_file(&self) -> SchemeFile {
        let b = self.lattice.basis();
        let n = self.total_dim();
        SchemeFile {
            total_dim: n,
            physical_dim: self.physical_dim,
            basis: (0..n).map(|i| (0..n).map(|j| b[(i, j)]).collect()).collect(),
            window: self.window.lo.iter().zip(&self.window.hi).map(|(&a, &b)| [a, b]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scheme serializes")
    }

    pub fn total_dim(&self) -> usize {
        self.lattice.dimension()
    }

    pub fn physical_dim(&self) -> usize {
        self.physical_dim
    }

    pub fn internal_dim(&self) -> usize {
        self.total_dim() - self.physical_dim
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn covolume(&self) -> f64 {
        self.lattice.covolume()
    }

    /// Set when some internal axis sees a discrete (rationally dependent)
    /// projection of the lattice, so the model set need not be uniformly
    /// distributed.
    pub fn density_warning(&self) -> Option<&str> {
        self.density_warning.as_deref()
    }

    /// `vol(W) / covol(L)`.
    pub fn density(&self) -> f64 {
        self.window.volume() / self.covolume()
    }

    /// Lattice points whose physical part has norm at most `radius` and whose
    /// internal part lies in `window`, as `(coefficients, point)` pairs sorted
    /// lexicographically by physical part. Errors on a projection collision.
    fn strip_points(&self, lattice: &Lattice, radius: f64, window: &Window) -> Result<Vec<(Vec<i64>, Vec<f64>)>> {
        let d = self.physical_dim;
        let lo: Vec<f64> = std::iter::repeat(-radius).take(d).chain(window.lo.iter().copied()).collect();
        let hi: Vec<f64> = std::iter::repeat(radius).take(d).chain(window.hi.iter().copied()).collect();
        let r2 = radius * radius;
        let mut pts = Vec::new();
        lattice.for_each_in_box(&lo, &hi, |c, x| {
            if x[..d].iter().map(|v| v * v).sum::<f64>() <= r2 {
                pts.push((c.to_vec(), x.to_vec()));
            }
        });
        pts.sort_by(|a, b| lex_cmp(&a.1[..d], &b.1[..d]));
        check_injective(&pts, d)?;
        Ok(pts)
    }

    /// Model-set points `p_d(z)` with `|p_d(z)| <= radius`, in lexicographic order.
    pub fn points_within(&self, radius: f64) -> Result<Vec<Vec<f64>>> {
        if !(radius >= 0.0) {
            return Err(Error::invalid("radius", "radius must be non-negative"));
        }
        Ok(self
            .strip_points(&self.lattice, radius, &self.window)?
            .into_iter()
            .map(|(_, x)| x[..self.physical_dim].to_vec())
            .collect())
    }
}

fn check_injective(pts: &[(Vec<i64>, Vec<f64>)], d: usize) -> Result<()> {
    for pair in pts.windows(2) {
        let gap2: f64 = pair[0].1[..d]
            .iter()
            .zip(&pair[1].1[..d])
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if gap2.sqrt() <= COLLISION_TOL {
            return Err(Error::ProjectionCollision {
                first: pair[0].0.clone(),
                second: pair[1].0.clone(),
            });
        }
    }
    Ok(())
}

/// Flags internal axes on which the basis coordinates are pairwise
/// rationally related (continued fractions with denominators up to `10^4`).
/// Such an axis carries a discrete projection of the lattice.
fn internal_density_warning(lattice: &Lattice, physical_dim: usize) -> Option<String> {
    let b = lattice.basis();
    let n = b.nrows();
    let mut axes = Vec::new();
    for row in physical_dim..n {
        let coords: Vec<f64> = (0..n).map(|j| b[(row, j)]).filter(|v| v.abs() > 1e-15).collect();
        let discrete = match coords.split_first() {
            None => true,
            Some((first, rest)) => rest.iter().all(|v| near_rational(v / first, 10_000)),
        };
        if discrete {
            axes.push(row - physical_dim);
        }
    }
    if axes.is_empty() {
        None
    } else {
        Some(format!(
            "internal projection is discrete along axes {axes:?}; the model set may not be uniformly distributed"
        ))
    }
}

fn near_rational(x: f64, max_den: u64) -> bool {
    // convergents p/q of the continued fraction of x
    let (mut p0, mut q0, mut p1, mut q1) = (0.0f64, 1.0f64, 1.0f64, 0.0f64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den as f64 {
            return false;
        }
        if (x - p2 / q2).abs() <= 1e-9 * x.abs().max(1.0) {
            return true;
        }
        let frac = r - a;
        if frac.abs() < 1e-15 {
            return true;
        }
        r = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    false
}

/// The model set `p_d(L ∩ (R^d x W))` as a unit-weight point source.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSet {
    scheme: CutProjectScheme,
}

impl ModelSet {
    pub fn new(scheme: CutProjectScheme) -> Self {
        Self { scheme }
    }

    pub fn scheme(&self) -> &CutProjectScheme {
        &self.scheme
    }
}

impl PointSource for ModelSet {
    fn dimension(&self) -> usize {
        self.scheme.physical_dim
    }

    fn descriptor(&self) -> String {
        format!(
            "model-set(N={}, d={}, vol(W)={})",
            self.scheme.total_dim(),
            self.scheme.physical_dim,
            self.scheme.window.volume()
        )
    }

    fn for_each_within(&self, radius: f64, visit: &mut dyn FnMut(&[f64], Complex64)) -> Result<()> {
        for x in self.scheme.points_within(radius)? {
            visit(&x, Complex64::new(1.0, 0.0));
        }
        Ok(())
    }
}

/// The finite part of the model set within `radius`.
pub fn model_set(scheme: &CutProjectScheme, radius: f64) -> Result<FinitePointSet> {
    let pts = scheme.points_within(radius)?;
    FinitePointSet::new(
        scheme.physical_dim,
        format!("model-set(R={radius})"),
        pts.into_iter()
            .map(|x| WeightedPoint {
                point: crate::riemann::Point::new(x).expect("finite coordinates"),
                weight: Complex64::new(1.0, 0.0),
            })
            .collect(),
    )
}

/// A Bragg peak: `(xi, xi_internal) ∈ L*` with amplitude `covol^{-1} χ_W^(xi_internal)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub xi: Vec<f64>,
    pub xi_internal: Vec<f64>,
    pub amplitude: Complex64,
    pub coeffs: Vec<i64>,
}

/// Dual-lattice points with `|xi| <= xi_cutoff` and `|a(xi)| >= amp_floor`,
/// sorted by `|xi|` and then lexicographically.
///
/// Peaks where the window transform vanishes exactly are dropped along with
/// everything else below the floor.
pub fn qc_spectrum(scheme: &CutProjectScheme, xi_cutoff: f64, amp_floor: f64) -> Result<Vec<SpectrumEntry>> {
    if !(xi_cutoff > 0.0 && xi_cutoff.is_finite()) {
        return Err(Error::invalid("xi_cutoff", "cutoff must be positive"));
    }
    if !(amp_floor > 0.0 && amp_floor.is_finite()) {
        return Err(Error::invalid("amp_floor", "amplitude floor must be positive"));
    }
    let dual = scheme.lattice.dual()?;
    let covol = scheme.covolume();
    let widths: Vec<f64> = scheme.window.lo.iter().zip(&scheme.window.hi).map(|(a, b)| b - a).collect();
    // |χ^| <= prod_{i != j} w_i / (π |ξ'_j|), which bounds each internal coordinate
    let bounds: Vec<f64> = (0..widths.len())
        .map(|j| {
            let others: f64 = widths.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, w)| w).product();
            others / (PI * amp_floor * covol)
        })
        .collect();
    let internal_box = Window {
        lo: bounds.iter().map(|b| -b).collect(),
        hi: bounds.clone(),
    };
    let d = scheme.physical_dim;
    let mut out: Vec<SpectrumEntry> = scheme
        .strip_points(&dual, xi_cutoff, &internal_box)?
        .into_iter()
        .filter_map(|(coeffs, x)| {
            let (xi, xi_int) = (x[..d].to_vec(), x[d..].to_vec());
            let amplitude = scheme.window.ft(&xi_int) / covol;
            (amplitude.norm() >= amp_floor).then_some(SpectrumEntry {
                xi,
                xi_internal: xi_int,
                amplitude,
                coeffs,
            })
        })
        .collect();
    out.sort_by(|a, b| {
        norm(&a.xi)
            .total_cmp(&norm(&b.xi))
            .then_with(|| lex_cmp(&a.xi, &b.xi))
    });
    Ok(out)
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
}

/// `Σ_{z∈Γ} f(z)` against `Σ_ξ a(ξ) f^(ξ)` over a computed spectrum.
pub fn spectral_sum_check(
    scheme: &CutProjectScheme,
    f: &TestFunction,
    spectrum: &[SpectrumEntry],
) -> Result<SpectralCheck> {
    let k_max = spectrum.iter().map(|e| norm(&e.xi)).fold(0.0, f64::max);
    let ft = BumpTransform::new(f, k_max)?;
    let lhs = direct_sum(scheme, f)?;
    let mut rhs = ComplexNeumaier::default();
    for e in spectrum {
        rhs.add(e.amplitude * ft.eval(&e.xi));
    }
    let rhs = rhs.value().re;
    Ok(SpectralCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).abs(),
    })
}

fn direct_sum(scheme: &CutProjectScheme, f: &TestFunction) -> Result<f64> {
    if f.dimension() != scheme.physical_dim {
        return Err(Error::DimensionMismatch {
            expected: scheme.physical_dim,
            found: f.dimension(),
        });
    }
    Ok(scheme
        .points_within(f.support_radius())?
        .iter()
        .map(|x| f.eval(x))
        .collect::<Neumaier>()
        .value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralizedPoissonCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    /// Smoothing level actually used; raised above the request when a lattice
    /// point of the strip falls in the smoothing collar.
    pub effective_n: u64,
    pub terms: usize,
}

/// Poisson summation for the model set with the window indicator replaced
/// by a smooth `g_N`: `1` on `W`, `0` outside the `1/N` neighbourhood.
///
/// `g_N` is the indicator of `W` grown by `δ` convolved with a product bump
/// mollifier of width `δ`, with `2δ√k = 1/N` for `k` internal dimensions. Its
/// transform is `χ_{W+δ}^(ξ') Π_j φ^(δ ξ'_j) / φ^(0)`. The sum over `L*` is
/// truncated to the full ball `|(ξ, ξ')| <= xi_cutoff`.
pub fn generalized_poisson_check(
    scheme: &CutProjectScheme,
    f: &TestFunction,
    smoothing_n: u64,
    xi_cutoff: f64,
) -> Result<GeneralizedPoissonCheck> {
    if smoothing_n == 0 {
        return Err(Error::invalid("smoothing_n", "must be at least 1"));
    }
    if !(xi_cutoff > 0.0 && xi_cutoff.is_finite()) {
        return Err(Error::invalid("xi_cutoff", "cutoff must be positive"));
    }
    let lhs = direct_sum(scheme, f)?;
    let k = scheme.internal_dim() as f64;
    let collar = |n: u64| 1.0 / (n as f64 * k.sqrt());
    // nearest strip point outside W decides how thin the collar must be
    let outside = scheme.strip_points(&scheme.lattice, f.support_radius(), &scheme.window.enlarged(collar(smoothing_n)))?;
    let gap = outside
        .iter()
        .map(|(_, x)| scheme.window.distance(&x[scheme.physical_dim..]))
        .filter(|&g| g > 0.0)
        .fold(f64::INFINITY, f64::min);
    let mut effective_n = smoothing_n;
    while collar(effective_n) >= gap {
        effective_n += 1;
    }
    let delta = collar(effective_n) / 2.0;
    let grown = scheme.window.enlarged(delta);
    let mollifier = BumpTransform::with_params(vec![0.0], 1.0, delta * xi_cutoff)?;
    let ft = BumpTransform::new(f, xi_cutoff)?;

    let dual = scheme.lattice.dual()?;
    let n = scheme.total_dim();
    let d = scheme.physical_dim;
    let r2 = xi_cutoff * xi_cutoff;
    let mut terms = 0usize;
    let mut rhs = ComplexNeumaier::default();
    let mut pts = Vec::new();
    dual.for_each_in_box(&vec![-xi_cutoff; n], &vec![xi_cutoff; n], |_, x| {
        if x.iter().map(|v| v * v).sum::<f64>() <= r2 {
            pts.push(x.to_vec());
        }
    });
    pts.sort_by(|a, b| lex_cmp(a, b));
    for x in &pts {
        let (xi, xi_int) = x.split_at(d);
        let smooth: f64 = xi_int
            .iter()
            .map(|&v| mollifier.radial(delta * v.abs()) / mollifier.integral())
            .product();
        let g_hat = grown.ft(xi_int) * smooth;
        rhs.add(g_hat * ft.eval(xi));
        terms += 1;
    }
    let rhs = rhs.value().re / scheme.covolume();
    Ok(GeneralizedPoissonCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).abs(),
        effective_n,
        terms,
    })
}

/// Shorthand for a centred bump in physical space.
pub fn physical_bump(scheme: &CutProjectScheme, radius: f64) -> Result<TestFunction> {
    TestFunction::bump(vec![0.0; scheme.physical_dim], radius)
}
