//! Numerical toolkit for the entropy metric on length functions of rose graphs
//! and its pullback to the shift locus of monic centered polynomials.
//!
//! - [`polydyn`]: polynomials, Green function, critical heights.
//! - [`rosemetric`]: metric graphs, topological entropy, the entropy norm, path
//!   lengths and distance upper bounds.
//! - [`shiftlocus`]: base and twist length functions, height segments, sequence
//!   families and their asymptotic diagnostics.
//! - [`harness`]: experiment drivers shared by the CLI and the acceptance suite.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod numeric;
pub mod polydyn;
pub mod rosemetric;
pub mod shiftlocus;

pub use error::{Error, Result};
