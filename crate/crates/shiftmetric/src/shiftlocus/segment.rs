use std::sync::Arc;

use super::base::{base_length_derivative, twist_length, TwistState};
use crate::error::{domain, Result};
use crate::numeric::quadrature::QuadratureConfig;
use crate::polydyn::CriticalHeights;
use crate::rosemetric::{path_length, PathSpec};

/// Linear interpolation between two height vectors of the same degree.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightSegment {
    pub from: CriticalHeights,
    pub to: CriticalHeights,
    /// Parameters in `(0, 1)` where two heights differ by an integer power of
    /// `D`, increasing.
    pub breakpoints: Vec<f64>,
}

/// Twist coordinates moved linearly at fixed heights, with the twist scale
/// frozen at the start.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistSegment {
    pub from: TwistState,
    pub to: TwistState,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Height(HeightSegment),
    Twist(TwistSegment),
}

pub fn height_segment(from: &CriticalHeights, to: &CriticalHeights) -> Result<HeightSegment> {
    if from.degree() != to.degree() {
        return domain("height segment endpoints have different degrees");
    }
    if from.min() <= 0.0 || to.min() <= 0.0 {
        return Err(crate::Error::DegenerateBasepoint);
    }
    let d = from.degree() as f64;
    let (a, b) = (from.as_slice(), to.as_slice());
    let mut cuts = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            // h_i(t) / h_j(t) is monotone in t, so the powers it crosses lie
            // between the endpoint exponents.
            let e0 = (a[i] / a[j]).ln() / d.ln();
            let e1 = (b[i] / b[j]).ln() / d.ln();
            let (lo, hi) = (e0.min(e1).floor() as i64, e0.max(e1).ceil() as i64);
            for m in lo..=hi {
                let p = d.powi(m as i32);
                let g0 = a[i] - p * a[j];
                let g1 = b[i] - p * b[j];
                if g0 != g1 {
                    let t = g0 / (g0 - g1);
                    if t > 1e-12 && t < 1.0 - 1e-12 {
                        cuts.push(t);
                    }
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    Ok(HeightSegment {
        from: from.clone(),
        to: to.clone(),
        breakpoints: cuts,
    })
}

impl HeightSegment {
    pub fn heights_at(&self, t: f64) -> Vec<f64> {
        self.from
            .as_slice()
            .iter()
            .zip(self.to.as_slice())
            .map(|(a, b)| a + t * (b - a))
            .collect()
    }

    /// Sub-curve on `[t0, t1]` reparametrized to `[0, 1]`, with analytic velocity.
    pub fn piece(&self, t0: f64, t1: f64) -> PathSpec {
        let a = self.from.as_slice().to_vec();
        let b = self.to.as_slice().to_vec();
        let (a2, b2) = (a.clone(), b.clone());
        let value = move |s: f64| -> Vec<f64> {
            let t = t0 + s * (t1 - t0);
            let h: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + t * (y - x)).collect();
            base_of(&h)
        };
        let derivative = move |s: f64| -> Vec<f64> {
            let t = t0 + s * (t1 - t0);
            let h: Vec<f64> = a2.iter().zip(&b2).map(|(x, y)| x + t * (y - x)).collect();
            let dh: Vec<f64> = a2.iter().zip(&b2).map(|(x, y)| (y - x) * (t1 - t0)).collect();
            base_length_derivative(&h, &dh)
        };
        PathSpec::Curve {
            value: Arc::new(value),
            derivative: Some(Arc::new(derivative)),
        }
    }

    /// Whole segment split at its breakpoints.
    pub fn path(&self) -> PathSpec {
        let mut knots = vec![0.0];
        knots.extend(&self.breakpoints);
        knots.push(1.0);
        PathSpec::Concat(knots.windows(2).map(|w| self.piece(w[0], w[1])).collect())
    }
}

pub(super) fn base_of(h: &[f64]) -> Vec<f64> {
    let h1 = h[0];
    let mut out = Vec::with_capacity(2 * h.len());
    out.push(h1);
    out.extend(h[1..].iter().map(|x| x / h1));
    out.extend(std::iter::repeat_n(1.0, h.len()));
    out
}

pub fn twist_segment(heights: &CriticalHeights, theta_from: &[f64], theta_to: &[f64]) -> Result<TwistSegment> {
    let from = TwistState::new(heights.clone(), theta_from.to_vec())?;
    let to = TwistState::with_scale(heights.clone(), theta_to.to_vec(), from.h0)?;
    Ok(TwistSegment { from, to })
}

impl TwistSegment {
    pub fn path(&self) -> Result<PathSpec> {
        Ok(PathSpec::Linear {
            from: twist_length(&self.from)?.as_slice().to_vec(),
            to: twist_length(&self.to)?.as_slice().to_vec(),
        })
    }
}

impl Segment {
    pub fn path(&self) -> Result<PathSpec> {
        match self {
            Segment::Height(s) => Ok(s.path()),
            Segment::Twist(s) => s.path(),
        }
    }
}

/// Entropy length of the rescaled segment.
pub fn segment_entropy_length(seg: &Segment, cfg: &QuadratureConfig) -> Result<f64> {
    path_length(&seg.path()?, cfg)
}
