//! Monic centered polynomials, their Green function and critical heights.

mod critical;
mod green;
mod heights;
mod polynomial;

pub use critical::{critical_points, CriticalPoint, CriticalPointConfig};
pub use green::{escape_radius, green_function, GreenConfig};
pub use heights::{
    critical_heights, heights_from_points, is_generic, is_shift_locus, subannuli, CriticalHeights, Subannuli,
    DEFAULT_RATIO_TOL, DEFAULT_SHIFT_EPS,
};
pub use polynomial::Polynomial;
