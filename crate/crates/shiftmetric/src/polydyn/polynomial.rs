use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `z^D + a_{D-2} z^{D-2} + ... + a_0`.
///
/// `coeffs` holds `a_{D-2}, ..., a_0`, highest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    degree: usize,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    degree: usize,
    coeffs: Vec<[f64; 2]>,
}

impl Polynomial {
    pub fn new(degree: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if degree < 2 {
            return domain(format!("degree must be at least 2, got {degree}"));
        }
        if coeffs.len() != degree - 1 {
            return domain(format!(
                "degree {degree} needs {} coefficients, got {}",
                degree - 1,
                coeffs.len()
            ));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return domain("coefficients must be finite");
        }
        Ok(Polynomial { degree, coeffs })
    }

    /// `z^D`.
    pub fn power(degree: usize) -> Result<Self> {
        Self::new(degree, vec![Complex64::new(0.0, 0.0); degree.saturating_sub(1)])
    }

    /// `z^2 + c`.
    pub fn quadratic(c: Complex64) -> Self {
        Polynomial {
            degree: 2,
            coeffs: vec![c],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` for `0 <= k <= D`.
    pub fn coeff(&self, k: usize) -> Complex64 {
        let d = self.degree;
        if k == d {
            Complex64::new(1.0, 0.0)
        } else if k == d - 1 || k > d {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[d - 2 - k]
        }
    }

    /// Sum of the moduli of the non-leading coefficients.
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        // z^D + 0 z^{D-1} + a_{D-2} z^{D-2} + ...
        let mut acc = z;
        for c in &self.coeffs {
            acc = acc * z + c;
        }
        acc
    }

    /// Coefficients of `f'` from `z^{D-1}` down to the constant term.
    pub fn derivative_coeffs(&self) -> Vec<Complex64> {
        let d = self.degree;
        (0..d).rev().map(|k| self.coeff(k + 1) * (k + 1) as f64).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PolynomialJson = serde_json::from_str(text)?;
        Self::new(
            raw.degree,
            raw.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let raw = PolynomialJson {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        };
        serde_json::to_string(&raw).expect("plain data serializes")
    }
}
