//! Lattices, Poisson summation and the spectra of cut-and-project sets and
//! of the primitive lattice points.

mod lattice;
mod model_set;
mod poisson;
mod prim;
mod quadrature;

pub use lattice::{dual_lattice, Lattice, MAX_CONDITION};
pub use model_set::{
    generalized_poisson_check, model_set, physical_bump, qc_spectrum, spectral_sum_check, CutProjectScheme,
    GeneralizedPoissonCheck, ModelSet, SchemeFile, SpectralCheck, SpectrumEntry, Window,
};
pub use poisson::{poisson_check, poisson_check_auto, Gaussian, PoissonCheck};
pub use prim::{
    n_of_xi, prim_coefficient, prim_coefficient_limit, prim_expansion, prim_poisson_check, twisted_density_check,
    PrimEntry, PrimExpansion, PrimPoissonCheck, TwistedDensity, TwistedSource,
};
pub use quadrature::{BumpTransform, GaussLegendre};
