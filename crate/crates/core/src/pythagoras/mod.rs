//! Primitive Pythagorean triples, sector counts and rational points on the
//! unit circle.
//!
//! Triples are generated from coprime pairs `m > n` of opposite parity and
//! kept in the canonical odd-leg-first form. Within a common hypotenuse they
//! are ordered by the even leg.

mod circle;
mod triples;

pub use circle::{
    equidistribution_stat, exact_angle, expected_arc_count, fermat_characterization_check,
    parity_split, predicted_multiplicity, rational_circle_points, EquidistributionStat,
    FermatMismatch, FermatReport, RationalCirclePoint,
};
pub use triples::{
    enumerate_ppt, lehmer_ratio, load_triple_table, nth_ppt, ppt_from_pair, sector_count,
    sector_density, PPTriple, TableRow,
};
