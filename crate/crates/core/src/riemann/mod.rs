//! Generalized Riemann sums `σ(f, Γ, ω) = Σ f(z) ω(z)` over weighted discrete
//! sets, their `eps`-scaled limits (constant densities), and the classical
//! partition sums used to check them.

mod delone;
mod density;
mod source;
mod sums;
mod test_function;

pub use delone::{delone_check, DeloneReport, Region};
pub use density::{
    default_schedule, estimate_density, halving_schedule, linear_intercept, DensityEstimate,
    FIT_POINTS,
};
pub use source::{
    for_each_integer_point, FinitePointSet, IntegerLattice, Point, PointSource, WeightedPoint,
};
pub(crate) use source::lex_cmp;
pub use sums::{integral, partition_riemann_sum, riemann_sum, SampleMode};
pub use test_function::{
    ball_volume, interval_ft, sector_area, Integrand, LinearCombination, Shape, TestFunction,
};
