//! Möbius sieve, zeta values, visible lattice points and the exact
//! inclusion-exclusion identities behind their densities.

mod combinatorics;
mod iep;
mod mobius;
mod primitive;

pub use combinatorics::{
    coprime_fraction, derangement_bound_holds, derangement_stats, factorial, inverse_e_enclosure,
    totients, DerangementStats,
};
pub use iep::{
    iep_mobius_identity_check, iep_odd_identity_check, BallFunction, BoxFunction, IdentityCheck,
    LatticeFunction, TableFunction,
};
pub use mobius::{mobius_sieve, zeta, MobiusTable};
pub use primitive::{gcd, is_primitive, primitive_points, PrimitivePoints, PrimitiveSetKind};
