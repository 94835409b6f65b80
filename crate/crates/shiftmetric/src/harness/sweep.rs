use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::numeric::roots::brent;
use crate::polydyn::{green_function, CriticalHeights, GreenConfig, Polynomial};
use crate::rosemetric::{distance_upper, rose, DistanceConfig};
use crate::shiftlocus::{twist_length, TwistState};

#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    /// Angles per level, at `2 pi (i + 1/2) / samples`.
    pub samples: usize,
    /// Refinement levels of each consecutive distance bound (0 is the chord).
    pub refine: usize,
    pub green: GreenConfig,
    pub distance: DistanceConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 256,
            refine: 0,
            green: GreenConfig::default(),
            distance: DistanceConfig {
                levels: 0,
                ..Default::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub h: f64,
    pub length: f64,
    /// Samples that made it into the estimate.
    pub samples: usize,
    /// Angles where the level curve could not be traced.
    pub failed: Vec<f64>,
}

fn critical_height(c: Complex64, cfg: &GreenConfig) -> Result<f64> {
    // The critical value is c, and G(0) = G(c) / 2.
    Ok(0.5 * green_function(&Polynomial::quadratic(c), c, cfg)?)
}

/// Parameter `c = r e^{i theta}` with critical height `h`, by radial root finding.
pub fn level_point(h: f64, theta: f64, cfg: &GreenConfig) -> Result<Complex64> {
    if !(h > 0.0) {
        return domain("level must be positive");
    }
    let dir = Complex64::from_polar(1.0, theta);
    let g = |r: f64| critical_height(dir * r, cfg).map(|v| v - h).unwrap_or(f64::NAN);
    let mut hi = (2.0 * h + 1.0).exp().max(4.0);
    while !(g(hi) > 0.0) {
        hi *= 2.0;
        if hi > 1e300 {
            return domain("level curve not bracketed");
        }
    }
    let r = brent(g, 0.0, hi, 1e-14 * hi, 200)?;
    Ok(dir * r)
}

/// Rose length estimate of the level curve of the critical height in the
/// quadratic family: consecutive samples are mapped to twisted base lengths
/// and joined by distance upper bounds.
pub fn sweep_s2(levels: &[f64], cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.samples < 2 || levels.is_empty() {
        return domain("need at least two samples and one level");
    }
    let mut dist = cfg.distance;
    dist.levels = cfg.refine;
    levels
        .par_iter()
        .map(|&h| {
            let heights = CriticalHeights::new(vec![h])?;
            let traced: Vec<(f64, bool)> = (0..cfg.samples)
                .into_par_iter()
                .map(|i| {
                    let theta = 2.0 * PI * (i as f64 + 0.5) / cfg.samples as f64;
                    (theta, level_point(h, theta, &cfg.green).is_ok())
                })
                .collect();
            let failed: Vec<f64> = traced.iter().filter(|t| !t.1).map(|t| t.0).collect();
            let points: Vec<Vec<f64>> = traced
                .iter()
                .filter(|t| t.1)
                .map(|&(theta, _)| {
                    let state = TwistState::new(heights.clone(), vec![theta / PI - 1.0])?;
                    let l = twist_length(&state)?;
                    let e = rose::entropy(l.as_slice())?;
                    Ok(l.as_slice().iter().map(|x| x * e).collect())
                })
                .collect::<Result<_>>()?;
            let legs: Vec<f64> = points
                .par_windows(2)
                .map(|w| Ok(distance_upper(&w[0], &w[1], &dist)?.value))
                .collect::<Result<_>>()?;
            Ok(SweepRow {
                h,
                length: legs.iter().sum(),
                samples: points.len(),
                failed,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("h,length,samples\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            super::fmt_float(r.h),
            super::fmt_float(r.length),
            r.samples
        ));
    }
    out
}
