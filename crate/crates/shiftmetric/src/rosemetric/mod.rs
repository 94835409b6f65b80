//! Metric graphs, topological entropy of length functions and the entropy
//! metric on unit-entropy length functions of roses.

mod circuits;
mod cycles;
mod distance;
mod entropy;
mod graph;
mod length;
mod norm;
mod path;
pub mod rose;
mod spectral;

pub use circuits::{circuit_count, CIRCUIT_STATE_CAP};
pub use cycles::{f_gamma, f_gamma_grad_pairing, f_gamma_hess_quadform, CycleComplex, Simplex, DEFAULT_MAX_PETALS};
pub use distance::{distance_upper, DistanceBound, DistanceConfig};
pub use entropy::{entropy, entropy_all, normalize_unit_entropy, EntropyMethod};
pub use graph::MetricGraph;
pub use length::{embed_extended, LengthFunction};
pub use norm::{entropy_norm_sq, tangent_normal, NormMethod, TangentVector};
pub(crate) use path::path_length_fixed;
pub use path::{path_length, path_velocity, CurveFn, PathSpec};
pub use spectral::{pressure, spectral_radius, weighted_matrix};

/// Tolerance for "this length function has unit entropy".
pub const UNIT_ENTROPY_TOL: f64 = 1e-9;
/// Tolerance for "this vector is tangent to the unit entropy locus".
pub const TANGENT_TOL: f64 = 1e-9;
