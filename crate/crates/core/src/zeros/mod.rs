//! Numerical zero finding for closed-form transforms.

mod bessel;
mod compare;
mod contour;
mod locate;

pub use bessel::{bessel_reference, spherical_jn};
pub use compare::{
    compare_zero_sets, matching_distance, structure_checks, CommonPair, StructureFlags,
    ZeroComparison,
};
pub use contour::{count_with_rect, count_zeros, AnalyticPair, CountResult, SearchRect};
pub use locate::{abs_grid, locate_zeros, LocatedZero, ZeroSet};
