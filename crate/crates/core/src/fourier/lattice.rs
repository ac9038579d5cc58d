use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::riemann::{lex_cmp, PointSource};

/// Largest accepted condition number of a lattice basis.
pub const MAX_CONDITION: f64 = 1e12;

/// A full-rank lattice in `R^d`, generated by the columns of `basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    basis: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl Lattice {
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        if basis.nrows() != basis.ncols() || basis.nrows() == 0 {
            return Err(Error::invalid(
                "basis",
                format!("need a non-empty square matrix, got {}x{}", basis.nrows(), basis.ncols()),
            ));
        }
        if basis.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("basis", "entries must be finite"));
        }
        let sv = basis.singular_values();
        let (smax, smin) = (sv.max(), sv.min());
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) {
            return Err(Error::IllConditioned { condition });
        }
        let inverse = basis
            .clone()
            .try_inverse()
            .ok_or(Error::IllConditioned { condition })?;
        Ok(Self { basis, inverse })
    }

    /// Builds a lattice from basis columns.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let d = columns.len();
        if d == 0 || columns.iter().any(|c| c.len() != d) {
            return Err(Error::invalid("basis", "need d columns of length d"));
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| columns[j][i]))
    }

    /// `Z^d`.
    pub fn integer(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    pub fn dimension(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn inverse_basis(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn covolume(&self) -> f64 {
        self.basis.determinant().abs()
    }

    pub fn gram(&self) -> DMatrix<f64> {
        self.basis.transpose() * &self.basis
    }

    /// `L* = {η : <η, z> ∈ Z for all z ∈ L}`, with basis `B^{-T}`.
    pub fn dual(&self) -> Result<Lattice> {
        Lattice::new(self.inverse.transpose())
    }

    /// The lattice vector `B c`.
    pub fn point(&self, coeffs: &[i64]) -> Vec<f64> {
        let d = self.dimension();
        (0..d)
            .map(|i| (0..d).map(|j| self.basis[(i, j)] * coeffs[j] as f64).sum())
            .collect()
    }

    /// Visits every lattice vector lying in the box `[lo, hi]`, in
    /// lexicographic order of the integer coefficients.
    pub fn for_each_in_box(&self, lo: &[f64], hi: &[f64], mut visit: impl FnMut(&[i64], &[f64])) {
        let d = self.dimension();
        assert_eq!(lo.len(), d);
        assert_eq!(hi.len(), d);
        if lo.iter().zip(hi).any(|(a, b)| !(a <= b)) {
            return;
        }
        // coefficient c_i = row_i(B^{-1}) x ranges over an interval as x ranges over the box
        let bounds: Vec<(i64, i64)> = (0..d)
            .map(|i| {
                let (mut a, mut b) = (0.0, 0.0);
                for j in 0..d {
                    let r = self.inverse[(i, j)];
                    let (u, v) = (r * lo[j], r * hi[j]);
                    a += u.min(v);
                    b += u.max(v);
                }
                ((a - 1e-9).floor() as i64, (b + 1e-9).ceil() as i64)
            })
            .collect();
        let mut coeffs = vec![0i64; d];
        let mut partial = vec![0.0; d];
        self.box_rec(0, &bounds, lo, hi, &mut coeffs, &mut partial, &mut visit);
    }

    #[allow(clippy::too_many_arguments)]
    fn box_rec(
        &self,
        k: usize,
        bounds: &[(i64, i64)],
        lo: &[f64],
        hi: &[f64],
        coeffs: &mut [i64],
        partial: &mut [f64],
        visit: &mut impl FnMut(&[i64], &[f64]),
    ) {
        let d = self.dimension();
        let col = self.basis.column(k);
        if k + 1 < d {
            for c in bounds[k].0..=bounds[k].1 {
                coeffs[k] = c;
                let saved = partial.to_vec();
                for i in 0..d {
                    partial[i] += c as f64 * col[i];
                }
                self.box_rec(k + 1, bounds, lo, hi, coeffs, partial, visit);
                partial.copy_from_slice(&saved);
            }
            return;
        }
        // last coefficient: intersect the per-axis intervals for t in partial + t col
        let (mut tlo, mut thi) = (bounds[k].0 as f64, bounds[k].1 as f64);
        for i in 0..d {
            if col[i] != 0.0 {
                let a = (lo[i] - partial[i]) / col[i];
                let b = (hi[i] - partial[i]) / col[i];
                tlo = tlo.max(a.min(b) - 1e-9);
                thi = thi.min(a.max(b) + 1e-9);
            } else if partial[i] < lo[i] || partial[i] > hi[i] {
                return;
            }
        }
        if tlo > thi {
            return;
        }
        let mut x = vec![0.0; d];
        for t in tlo.ceil() as i64..=thi.floor() as i64 {
            coeffs[k] = t;
            for i in 0..d {
                x[i] = partial[i] + t as f64 * col[i];
            }
            if x.iter().zip(lo.iter().zip(hi)).all(|(&v, (&a, &b))| a <= v && v <= b) {
                visit(coeffs, &x);
            }
        }
    }

    /// Lattice vectors of norm at most `radius`, ordered lexicographically by coordinates.
    pub fn points_within(&self, radius: f64) -> Vec<Vec<f64>> {
        let d = self.dimension();
        if !(radius >= 0.0) {
            return Vec::new();
        }
        let r2 = radius * radius;
        let mut out = Vec::new();
        self.for_each_in_box(&vec![-radius; d], &vec![radius; d], |_, x| {
            if x.iter().map(|v| v * v).sum::<f64>() <= r2 {
                out.push(x.to_vec());
            }
        });
        out.sort_by(|a, b| lex_cmp(a, b));
        out
    }
}

/// Free-function form of [`Lattice::dual`].
pub fn dual_lattice(lattice: &Lattice) -> Result<Lattice> {
    lattice.dual()
}

impl PointSource for Lattice {
    fn dimension(&self) -> usize {
        Lattice::dimension(self)
    }

    fn descriptor(&self) -> String {
        format!("lattice(d={}, covolume={})", self.dimension(), self.covolume())
    }

    fn for_each_within(&self, radius: f64, visit: &mut dyn FnMut(&[f64], Complex64)) -> Result<()> {
        for x in self.points_within(radius) {
            visit(&x, Complex64::new(1.0, 0.0));
        }
        Ok(())
    }
}
