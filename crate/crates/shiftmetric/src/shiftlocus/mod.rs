//! Pullback of the rose entropy metric to the shift locus through base and
//! twist length functions on the rose with `2D - 2` petals.

mod asymptotics;
mod base;
mod family;
mod rho;
mod segment;

pub use asymptotics::{
    cauchy_probe, entropy_asymptotics, index_set, AsymptoticCase, AsymptoticsReport, CauchyReport, IndexSetReport,
    RATIO_CUT,
};
pub use base::{base_length, tangent_image, twist_length, TwistState};
pub use family::{SequenceFamily, NAMED_REGIMES};
pub use rho::{rho_upper, RhoConfig};
pub use segment::{height_segment, segment_entropy_length, twist_segment, HeightSegment, Segment, TwistSegment};
