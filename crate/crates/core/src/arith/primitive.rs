use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::riemann::{for_each_integer_point, PointSource};

/// Which visible-point set to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimitiveSetKind {
    /// `Z^d_prim`: nonzero integer points whose coordinates have gcd 1.
    Prim(usize),
    /// `Z^{2,*}_prim`: primitive points of `Z^2` with `m - n` odd.
    PrimStar,
    /// `(Z^odd)^2_prim`: coprime pairs with both coordinates odd.
    OddPrim,
}

impl PrimitiveSetKind {
    pub fn dimension(&self) -> usize {
        match self {
            PrimitiveSetKind::Prim(d) => *d,
            _ => 2,
        }
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        match self {
            PrimitiveSetKind::Prim(_) => is_primitive(z),
            PrimitiveSetKind::PrimStar => (z[0] - z[1]).rem_euclid(2) == 1 && is_primitive(z),
            PrimitiveSetKind::OddPrim => {
                z[0].rem_euclid(2) == 1 && z[1].rem_euclid(2) == 1 && is_primitive(z)
            }
        }
    }
}

/// Binary gcd of absolute values, `gcd(0, k) = k`.
pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

/// `gcd(|z_1|, ..., |z_d|) == 1`.
pub fn is_primitive(z: &[i64]) -> bool {
    let mut g = 0u64;
    for &c in z {
        g = gcd(g, c.unsigned_abs());
        if g == 1 {
            return true;
        }
    }
    false
}

/// Unit-weight point source over one of the [`PrimitiveSetKind`] sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimitivePoints {
    kind: PrimitiveSetKind,
}

impl PrimitivePoints {
    pub fn new(kind: PrimitiveSetKind) -> Result<Self> {
        if kind.dimension() == 0 {
            return Err(Error::invalid("kind", "dimension must be at least 1"));
        }
        Ok(Self { kind })
    }

    pub fn kind(&self) -> PrimitiveSetKind {
        self.kind
    }

    /// Visits the integer coordinates of every member with `|z| <= radius`.
    pub fn for_each_integer(&self, radius: f64, mut visit: impl FnMut(&[i64])) {
        let kind = self.kind;
        for_each_integer_point(kind.dimension(), radius, |z| {
            if kind.contains(z) {
                visit(z);
            }
        });
    }
}

impl PointSource for PrimitivePoints {
    fn dimension(&self) -> usize {
        self.kind.dimension()
    }

    fn descriptor(&self) -> String {
        match self.kind {
            PrimitiveSetKind::Prim(d) => format!("Z^{d}_prim"),
            PrimitiveSetKind::PrimStar => "Z^{2,*}_prim".into(),
            PrimitiveSetKind::OddPrim => "(Z^odd)^2_prim".into(),
        }
    }

    fn for_each_within(
        &self,
        radius: f64,
        visit: &mut dyn FnMut(&[f64], Complex64),
    ) -> Result<()> {
        let one = Complex64::new(1.0, 0.0);
        let mut buf = vec![0.0; self.dimension()];
        self.for_each_integer(radius, |z| {
            for (b, &c) in buf.iter_mut().zip(z) {
                *b = c as f64;
            }
            visit(&buf, one);
        });
        Ok(())
    }
}

/// The lazy source for `kind`; enumerate it with a radius.
pub fn primitive_points(kind: PrimitiveSetKind) -> Result<PrimitivePoints> {
    PrimitivePoints::new(kind)
}
