use crate::error::{Error, Result};
use crate::rosemetric::{entropy, entropy_all, EntropyMethod, LengthFunction, MetricGraph};

/// Largest spread between entropy methods accepted by [`checked_entropy`].
pub const CROSS_CHECK_TOL: f64 = 1e-6;

/// Fault injection: shift one method's value before the comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub method: EntropyMethod,
    pub delta: f64,
}

impl Perturbation {
    /// Parses `method=delta`.
    pub fn parse(s: &str) -> Option<Self> {
        let (m, d) = s.split_once('=')?;
        Some(Perturbation {
            method: EntropyMethod::parse(m.trim())?,
            delta: d.trim().parse().ok()?,
        })
    }
}

/// Entropy by `method`, compared against every other applicable method.
/// A spread above `tol` (relative to the value) is an error carrying all values.
pub fn checked_entropy(
    g: &MetricGraph,
    l: &LengthFunction,
    method: EntropyMethod,
    tol: f64,
    perturb: Option<Perturbation>,
) -> Result<f64> {
    let mut values = entropy_all(g, l)?;
    if !values.iter().any(|(m, _)| *m == method) {
        values.push((method, entropy(g, l, method)?));
    }
    if let Some(p) = perturb {
        for (m, v) in values.iter_mut() {
            if *m == p.method {
                *v += p.delta;
            }
        }
    }
    let chosen = values.iter().find(|(m, _)| *m == method).map(|(_, v)| *v).unwrap();
    let spread = values.iter().map(|(_, v)| (v - chosen).abs()).fold(0.0, f64::max);
    if spread > tol * chosen.abs().max(1.0) {
        return Err(Error::MethodDisagreement {
            values: values.into_iter().map(|(m, v)| (m.name().to_string(), v)).collect(),
        });
    }
    Ok(chosen)
}
