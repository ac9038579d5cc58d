//! Generalized Riemann sums over weighted discrete point sets.
//!
//! The crate builds the discrete sets that show up when lattice-point counting
//! meets aperiodic order, and measures how they fill space:
//!
//! - [`riemann`]: weighted point sources, scaled Riemann sums, constant-density
//!   estimation and Delone diagnostics.
//! - [`arith`]: Möbius sieve, zeta values, primitive lattice points and exact
//!   inclusion-exclusion identities.
//! - [`pythagoras`]: primitive Pythagorean triples, sector counts and rational
//!   points on the unit circle.
//! - [`fourier`]: lattices and their duals, Poisson summation, cut-and-project
//!   model sets and the spectral expansion of the primitive lattice points.
//!
//! Density limits are the central quantity. For the primitive points of
//! `Z^2` the limit is `6/pi^2`:
//!
//! ```
//! use riemann_sums::arith::{PrimitivePoints, PrimitiveSetKind};
//! use riemann_sums::riemann::{estimate_density, TestFunction};
//!
//! let f = TestFunction::ball(vec![0.0, 0.0], 1.0).unwrap();
//! let src = PrimitivePoints::new(PrimitiveSetKind::Prim(2)).unwrap();
//! let est = estimate_density(&f, &src, &[1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0]).unwrap();
//! assert!((est.extrapolated.re - 6.0 / std::f64::consts::PI.powi(2)).abs() < 0.02);
//! ```

pub mod arith;
pub mod error;
pub mod fourier;
pub mod pythagoras;
pub mod riemann;
pub mod summation;

pub use error::{Error, Result};
