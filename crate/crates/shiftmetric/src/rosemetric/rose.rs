//! Closed forms specific to roses.
//!
//! With `w_i = exp(-l_i)` the rose determinant factors as
//! `det(I - Abar) = prod(1 + w_i) * (1 - 2 sum w_i / (1 + w_i))`, so the unit
//! entropy locus is `sum w_i / (1 + w_i) = 1/2`. Differentiating the second
//! factor gives the entropy norm and the tangent condition in `O(n)`.
//! Infinite lengths have `w = 0` and drop out of every sum.

use crate::error::{Error, Result};

/// `sum 1/(1 + e^{x_i}) - 1/2` and its derivative in `h` along `x = h l`.
fn defining(lengths: &[f64], h: f64) -> (f64, f64) {
    let mut g = -0.5;
    let mut dg = 0.0;
    for &l in lengths {
        if l.is_finite() {
            let w = (-h * l).exp();
            let s = w / (1.0 + w);
            g += s;
            dg -= l * s / (1.0 + w);
        }
    }
    (g, dg)
}

/// Topological entropy of a rose length function.
pub fn entropy(lengths: &[f64]) -> Result<f64> {
    let finite: Vec<f64> = lengths.iter().cloned().filter(|l| l.is_finite()).collect();
    if finite.len() < 2 {
        return Err(Error::DegenerateEntropy {
            finite_petals: finite.len(),
        });
    }
    let lmin = finite.iter().cloned().fold(f64::INFINITY, f64::min);
    let lmax = finite.iter().cloned().fold(0.0, f64::max);
    let base = ((2 * finite.len() - 1) as f64).ln();
    let (mut lo, mut hi) = (base / lmax, base / lmin);
    // Convex decreasing in h: Newton from the left increases monotonically.
    let mut h = lo;
    for _ in 0..200 {
        let (g, dg) = defining(&finite, h);
        if g == 0.0 {
            return Ok(h);
        }
        if g > 0.0 {
            lo = lo.max(h);
        } else {
            hi = hi.min(h);
        }
        let mut next = h - g / dg;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - h).abs() <= 2.0 * f64::EPSILON * h {
            return Ok(next);
        }
        h = next;
    }
    Err(Error::SolverFailure {
        residuals: vec![defining(&finite, h).0],
    })
}

/// `w_i / (1 + w_i)^2`: proportional to minus the entropy gradient at a unit
/// entropy point.
pub fn normal(lhat: &[f64]) -> Vec<f64> {
    lhat.iter()
        .map(|&l| {
            if l.is_finite() {
                let w = (-l).exp();
                w / ((1.0 + w) * (1.0 + w))
            } else {
                0.0
            }
        })
        .collect()
}

/// Gradient of the entropy function at any length function.
pub fn entropy_gradient(lengths: &[f64]) -> Result<Vec<f64>> {
    let h = entropy(lengths)?;
    let x: Vec<f64> = lengths.iter().map(|l| h * l).collect();
    let n = normal(&x);
    let pair: f64 = n
        .iter()
        .zip(lengths)
        .filter(|(_, l)| l.is_finite())
        .map(|(a, l)| a * l)
        .sum();
    Ok(n.iter().map(|a| -h * a / pair).collect())
}

/// `<v, v>` in the entropy metric at a unit entropy point.
pub fn norm_sq(lhat: &[f64], v: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&l, &vi) in lhat.iter().zip(v) {
        if l.is_finite() {
            let w = (-l).exp();
            let q = 1.0 + w;
            num += w * -(-l).exp_m1() / (q * q * q) * vi * vi;
            den += l * w / (q * q);
        }
    }
    num / den
}
