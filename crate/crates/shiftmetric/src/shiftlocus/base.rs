use crate::error::{domain, Error, Result};
use crate::polydyn::{subannuli, CriticalHeights};
use crate::rosemetric::LengthFunction;

fn check_positive(h: &CriticalHeights) -> Result<()> {
    if h.min() <= 0.0 {
        return Err(Error::DegenerateBasepoint);
    }
    Ok(())
}

/// `(h1, h2/h1, ..., h_{D-1}/h1, 1, ..., 1)` on the rose with `2D - 2` petals.
pub fn base_length(h: &CriticalHeights) -> Result<LengthFunction> {
    check_positive(h)?;
    let hs = h.as_slice();
    let h1 = hs[0];
    let mut out = Vec::with_capacity(2 * hs.len());
    out.push(h1);
    out.extend(hs[1..].iter().map(|x| x / h1));
    out.extend(std::iter::repeat_n(1.0, hs.len()));
    LengthFunction::new(out)
}

/// Derivative of [`base_length`] along a height direction.
pub(crate) fn base_length_derivative(h: &[f64], dh: &[f64]) -> Vec<f64> {
    let h1 = h[0];
    let mut out = Vec::with_capacity(2 * h.len());
    out.push(dh[0]);
    for j in 1..h.len() {
        out.push((dh[j] * h1 - h[j] * dh[0]) / (h1 * h1));
    }
    out.extend(std::iter::repeat_n(0.0, h.len()));
    out
}

/// Heights with normalized twist coordinates `theta` in `[-1, 1]`.
///
/// `h0 = max(h1, 1/h_{D-1})` scales the twist; it is frozen when a state is
/// moved along a twist segment.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistState {
    pub heights: CriticalHeights,
    pub theta: Vec<f64>,
    pub h0: f64,
}

impl TwistState {
    pub fn new(heights: CriticalHeights, theta: Vec<f64>) -> Result<Self> {
        check_positive(&heights)?;
        let h0 = heights.max().max(1.0 / heights.min());
        Self::with_scale(heights, theta, h0)
    }

    pub fn with_scale(heights: CriticalHeights, theta: Vec<f64>, h0: f64) -> Result<Self> {
        check_positive(&heights)?;
        if theta.len() != heights.as_slice().len() {
            return domain(format!(
                "need {} twist coordinates, got {}",
                heights.as_slice().len(),
                theta.len()
            ));
        }
        if theta.iter().any(|t| !t.is_finite() || t.abs() > 1.0) {
            return domain(format!("twist coordinates must lie in [-1, 1]: {theta:?}"));
        }
        if !(h0 >= 1.0) {
            return domain("twist scale must be at least 1");
        }
        if theta.iter().any(|t| 1.0 + t / h0 <= 0.0) {
            return domain("twist makes a petal length nonpositive");
        }
        Ok(TwistState { heights, theta, h0 })
    }

    /// Convert raw twists `theta_j` via `2 m_j theta_j / d_j`, where `m_j` are
    /// the subannulus moduli. `d_j` defaults to 1.
    pub fn from_raw(heights: CriticalHeights, raw: &[f64], d: Option<&[f64]>) -> Result<Self> {
        let sub = subannuli(&heights)?;
        if sub.count() != raw.len() {
            return domain(format!(
                "raw twists need one entry per subannulus ({}), got {}",
                sub.count(),
                raw.len()
            ));
        }
        let theta = (0..raw.len())
            .map(|j| 2.0 * sub.moduli[j] * raw[j] / d.map_or(1.0, |d| d[j]))
            .collect();
        Self::new(heights, theta)
    }
}

/// Base length with trailing entries `1 + theta_j / h0`.
pub fn twist_length(state: &TwistState) -> Result<LengthFunction> {
    let base = base_length(&state.heights)?;
    let mut l = base.as_slice().to_vec();
    let k = state.theta.len();
    for (j, t) in state.theta.iter().enumerate() {
        l[k + j] = 1.0 + t / state.h0;
    }
    LengthFunction::new(l)
}

/// Image of a shift-locus tangent vector in the tangent space of the unit
/// entropy locus, at the rescaled base length of `h`.
///
/// A nonzero height part wins; the twist part is used only for pure twist
/// directions.
pub fn tangent_image(h: &CriticalHeights, dh: &[f64], dtheta: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let base = base_length(h)?;
    let k = h.as_slice().len();
    if dh.len() != k || dtheta.len() != k {
        return domain("direction has the wrong dimension");
    }
    let dl = if dh.iter().any(|x| *x != 0.0) {
        base_length_derivative(h.as_slice(), dh)
    } else {
        let h0 = h.max().max(1.0 / h.min());
        let mut v = vec![0.0; 2 * k];
        for j in 0..k {
            v[k + j] = dtheta[j] / h0;
        }
        v
    };
    crate::rosemetric::path_velocity(
        &crate::rosemetric::PathSpec::Curve {
            value: std::sync::Arc::new({
                let l = base.as_slice().to_vec();
                move |_| l.clone()
            }),
            derivative: Some(std::sync::Arc::new(move |_| dl.clone())),
        },
        0.0,
    )
}
