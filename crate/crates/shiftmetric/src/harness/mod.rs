//! Experiment drivers shared by the command line tool and the tests.

mod check;
mod regimes;
mod sweep;

pub use check::{checked_entropy, Perturbation, CROSS_CHECK_TOL};
pub use regimes::{regimes, RegimeReport};
pub use sweep::{level_point, sweep_csv, sweep_s2, SweepConfig, SweepRow};

/// Float formatting used for every machine-readable output (17 significant digits).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}
