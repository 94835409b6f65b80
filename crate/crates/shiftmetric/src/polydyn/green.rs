use num_complex::Complex64;

use super::Polynomial;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy)]
pub struct GreenConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GreenConfig {
    fn default() -> Self {
        GreenConfig {
            tol: 1e-14,
            max_iter: 2048,
        }
    }
}

/// Outside this radius every orbit escapes and `log|f(z)| - D log|z|` is at
/// most `2A/|z|^2`, where `A` is the coefficient l1 norm.
pub fn escape_radius(f: &Polynomial) -> f64 {
    (2.0 * (1.0 + f.coeff_l1())).max(2.0)
}

/// Escape rate `lim D^{-n} log max(|f^n(z)|, 1)`.
///
/// Returns exactly `0.0` when the orbit stays inside the escape radius for
/// `max_iter` steps.
pub fn green_function(f: &Polynomial, z: Complex64, cfg: &GreenConfig) -> Result<f64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return domain("green function needs a finite point");
    }
    let d = f.degree() as f64;
    let a = f.coeff_l1();
    let radius = escape_radius(f);
    let mut w = z;
    let mut scale = 1.0; // D^{-n}
    for _ in 0..=cfg.max_iter {
        let r = w.norm();
        if r > radius {
            let tail = scale * 2.0 * a / ((d - 1.0) * r * r);
            if tail < cfg.tol || r > 1e100 {
                return Ok(scale * r.ln());
            }
        }
        w = f.eval(w);
        scale /= d;
    }
    Ok(0.0)
}
