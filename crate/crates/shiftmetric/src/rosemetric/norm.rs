use super::{
    entropy, f_gamma_grad_pairing, f_gamma_hess_quadform, rose, CycleComplex, EntropyMethod, LengthFunction,
    MetricGraph, TANGENT_TOL, UNIT_ENTROPY_TOL,
};
use crate::error::{domain, Error, Result};

/// How to evaluate `-<v, Hess F v> / <l, grad F>`.
#[derive(Debug, Clone, Copy)]
pub enum NormMethod<'a> {
    /// Closed form from the factored rose determinant.
    Rose,
    /// Cycle-complex expansion of `F`.
    Cycles(&'a CycleComplex),
    /// Finite differences of the full determinant `F`.
    Determinant,
    /// Finite-difference second derivative of the entropy itself.
    EntropyHessian,
}

/// Direction normal to the unit entropy locus at `lhat`.
///
/// For roses this is `w/(1+w)^2` with `w = exp(-lhat)`; otherwise the
/// finite-difference gradient of the determinant.
pub fn tangent_normal(g: &MetricGraph, lhat: &LengthFunction) -> Result<Vec<f64>> {
    lhat.check_graph(g)?;
    if g.is_rose() {
        return Ok(rose::normal(lhat.as_slice()));
    }
    let n = g.edge_count();
    (0..n)
        .map(|i| {
            if !lhat.as_slice()[i].is_finite() {
                return Ok(0.0);
            }
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            f_gamma_grad_pairing(g, lhat, &e)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_unit(g: &MetricGraph, lhat: &LengthFunction) -> Result<()> {
    let h = if g.is_rose() {
        rose::entropy(lhat.as_slice())?
    } else {
        entropy(g, lhat, EntropyMethod::Spectral)?
    };
    if (h - 1.0).abs() > UNIT_ENTROPY_TOL {
        return Err(Error::NotUnitEntropy { entropy: h });
    }
    Ok(())
}

/// Tangent vector to the unit entropy locus at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector(Vec<f64>);

impl TangentVector {
    pub fn new(g: &MetricGraph, lhat: &LengthFunction, v: Vec<f64>) -> Result<Self> {
        lhat.check_graph(g)?;
        if v.len() != lhat.len() {
            return domain("tangent vector has the wrong dimension");
        }
        for (l, x) in lhat.as_slice().iter().zip(&v) {
            if !x.is_finite() || (!l.is_finite() && *x != 0.0) {
                return domain("tangent components must be finite and vanish on infinite edges");
            }
        }
        let n = tangent_normal(g, lhat)?;
        let pairing = dot(&v, &n);
        let scale = dot(&v, &v).sqrt() * dot(&n, &n).sqrt();
        if pairing.abs() > TANGENT_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotTangent { pairing });
        }
        Ok(TangentVector(v))
    }

    /// Drop the normal component of `raw` (and anything on infinite edges).
    pub fn project(g: &MetricGraph, lhat: &LengthFunction, raw: &[f64]) -> Result<Self> {
        lhat.check_graph(g)?;
        let n = tangent_normal(g, lhat)?;
        let mut v: Vec<f64> = raw
            .iter()
            .zip(lhat.as_slice())
            .map(|(x, l)| if l.is_finite() { *x } else { 0.0 })
            .collect();
        let c = dot(&v, &n) / dot(&n, &n);
        for (vi, ni) in v.iter_mut().zip(&n) {
            *vi -= c * ni;
        }
        Ok(TangentVector(v))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Squared entropy norm of `v` at the unit entropy point `lhat`.
pub fn entropy_norm_sq(g: &MetricGraph, lhat: &LengthFunction, v: &TangentVector, method: NormMethod) -> Result<f64> {
    lhat.check_graph(g)?;
    check_unit(g, lhat)?;
    let v = v.as_slice();
    match method {
        NormMethod::Rose => {
            if !g.is_rose() {
                return domain("closed-form norm is for roses");
            }
            Ok(rose::norm_sq(lhat.as_slice(), v))
        }
        NormMethod::Cycles(cc) => {
            let num = cc.hess_quadform(lhat, v)?;
            let den = cc.grad_pairing(lhat, lhat.as_slice())?;
            Ok(-num / den)
        }
        NormMethod::Determinant => {
            let num = f_gamma_hess_quadform(g, lhat, v)?;
            let den = f_gamma_grad_pairing(g, lhat, lhat.as_slice())?;
            Ok(-num / den)
        }
        NormMethod::EntropyHessian => {
            let scale = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
            if scale == 0.0 {
                return Ok(0.0);
            }
            let s = 1e-3 / scale;
            let h = |t: f64| -> Result<f64> {
                let l: Vec<f64> = lhat
                    .as_slice()
                    .iter()
                    .zip(v)
                    .map(|(&l, &x)| if l.is_finite() { l + t * x } else { l })
                    .collect();
                if g.is_rose() {
                    rose::entropy(&l)
                } else {
                    entropy(g, &LengthFunction::extended(l)?, EntropyMethod::Spectral)
                }
            };
            Ok((-h(2.0 * s)? + 16.0 * h(s)? - 30.0 * h(0.0)? + 16.0 * h(-s)? - h(-2.0 * s)?) / (12.0 * s * s))
        }
    }
}
