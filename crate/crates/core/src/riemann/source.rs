use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("coords", "a point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coords", "coordinates must be finite"));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

/// A point together with its (nonzero) weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPoint {
    pub point: Point,
    pub weight: Complex64,
}

/// An enumerable weighted discrete set `(Γ, ω)` in `R^d`.
///
/// Implementations visit every point of norm at most `radius` exactly once,
/// in lexicographic order of coordinates, and never report a zero weight.
pub trait PointSource: Send + Sync {
    fn dimension(&self) -> usize;

    fn descriptor(&self) -> String;

    fn for_each_within(
        &self,
        radius: f64,
        visit: &mut dyn FnMut(&[f64], Complex64),
    ) -> Result<()>;

    fn enumerate(&self, radius: f64) -> Result<Vec<WeightedPoint>> {
        let mut out = Vec::new();
        self.for_each_within(radius, &mut |x, w| {
            out.push(WeightedPoint {
                point: Point {
                    coords: x.to_vec(),
                },
                weight: w,
            })
        })?;
        Ok(out)
    }

    fn count_within(&self, radius: f64) -> Result<usize> {
        let mut n = 0usize;
        self.for_each_within(radius, &mut |_, _| n += 1)?;
        Ok(n)
    }
}

impl<S: PointSource + ?Sized> PointSource for &S {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn descriptor(&self) -> String {
        (**self).descriptor()
    }

    fn for_each_within(
        &self,
        radius: f64,
        visit: &mut dyn FnMut(&[f64], Complex64),
    ) -> Result<()> {
        (**self).for_each_within(radius, visit)
    }
}

/// Visits the integer points `z` with `|z| <= radius` in lexicographic order.
pub fn for_each_integer_point(dim: usize, radius: f64, mut visit: impl FnMut(&[i64])) {
    if dim == 0 || !(radius >= 0.0) {
        return;
    }
    let mut z = vec![0i64; dim];
    integer_ball_rec(&mut z, 0, radius * radius, &mut visit);
}

fn integer_ball_rec(z: &mut [i64], k: usize, rem: f64, visit: &mut impl FnMut(&[i64])) {
    let mut m = rem.sqrt().floor() as i64;
    while ((m + 1) * (m + 1)) as f64 <= rem {
        m += 1;
    }
    while m > 0 && (m * m) as f64 > rem {
        m -= 1;
    }
    let last = k + 1 == z.len();
    for v in -m..=m {
        let r = rem - (v * v) as f64;
        if r < 0.0 {
            continue;
        }
        z[k] = v;
        if last {
            visit(z);
        } else {
            integer_ball_rec(z, k + 1, r, visit);
        }
    }
}

/// The full integer lattice `Z^d` with unit weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegerLattice {
    dim: usize,
}

impl IntegerLattice {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "dimension must be at least 1"));
        }
        Ok(Self { dim })
    }
}

impl PointSource for IntegerLattice {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn descriptor(&self) -> String {
        format!("Z^{}", self.dim)
    }

    fn for_each_within(
        &self,
        radius: f64,
        visit: &mut dyn FnMut(&[f64], Complex64),
    ) -> Result<()> {
        let one = Complex64::new(1.0, 0.0);
        let mut buf = vec![0.0; self.dim];
        for_each_integer_point(self.dim, radius, |z| {
            for (b, &c) in buf.iter_mut().zip(z) {
                *b = c as f64;
            }
            visit(&buf, one);
        });
        Ok(())
    }
}

/// An explicit finite weighted set, kept in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePointSet {
    dim: usize,
    name: String,
    points: Vec<WeightedPoint>,
}

impl FinitePointSet {
    /// Builds the set, sorting lexicographically and rejecting duplicates and zero weights.
    pub fn new(dim: usize, name: impl Into<String>, mut points: Vec<WeightedPoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "dimension must be at least 1"));
        }
        for p in &points {
            if p.point.dimension() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.point.dimension(),
                });
            }
            if p.weight == Complex64::new(0.0, 0.0) {
                return Err(Error::invalid("points", "weights must be nonzero"));
            }
        }
        points.sort_by(|a, b| lex_cmp(a.point.coords(), b.point.coords()));
        if points.windows(2).any(|w| w[0].point == w[1].point) {
            return Err(Error::invalid("points", "duplicate point"));
        }
        Ok(Self {
            dim,
            name: name.into(),
            points,
        })
    }

    /// Unit-weight set from raw coordinates.
    pub fn unit_weights(dim: usize, name: impl Into<String>, coords: Vec<Vec<f64>>) -> Result<Self> {
        let points = coords
            .into_iter()
            .map(|c| {
                Ok(WeightedPoint {
                    point: Point::new(c)?,
                    weight: Complex64::new(1.0, 0.0),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, name, points)
    }

    pub fn points(&self) -> &[WeightedPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl PointSource for FinitePointSet {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn descriptor(&self) -> String {
        self.name.clone()
    }

    fn for_each_within(
        &self,
        radius: f64,
        visit: &mut dyn FnMut(&[f64], Complex64),
    ) -> Result<()> {
        let r2 = radius * radius;
        for p in &self.points {
            let n2: f64 = p.point.coords().iter().map(|c| c * c).sum();
            if n2 <= r2 {
                visit(p.point.coords(), p.weight);
            }
        }
        Ok(())
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}
