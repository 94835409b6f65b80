use std::cell::RefCell;
use std::sync::Arc;

use super::rose;
use crate::error::{domain, Error, Result};
use crate::numeric::quadrature::{integrate_adaptive, GaussLegendre, QuadratureConfig};

pub type CurveFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// A curve of rose length functions over `t in [0, 1]`. Points need not have
/// unit entropy; every sample is rescaled before measuring.
#[derive(Clone)]
pub enum PathSpec {
    Linear {
        from: Vec<f64>,
        to: Vec<f64>,
    },
    /// Straight line in log-length coordinates.
    LogLinear {
        from: Vec<f64>,
        to: Vec<f64>,
    },
    /// Arbitrary curve; without `derivative` the velocity comes from fourth-order
    /// central differences, so `value` must accept `t` slightly outside `[0, 1]`.
    Curve {
        value: CurveFn,
        derivative: Option<CurveFn>,
    },
    /// Pieces traversed in order, each over its own `[0, 1]`.
    Concat(Vec<PathSpec>),
}

impl std::fmt::Debug for PathSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PathSpec::Linear { from, to } => write!(f, "Linear({from:?} -> {to:?})"),
            PathSpec::LogLinear { from, to } => write!(f, "LogLinear({from:?} -> {to:?})"),
            PathSpec::Curve { derivative, .. } => write!(f, "Curve(analytic: {})", derivative.is_some()),
            PathSpec::Concat(p) => f.debug_list().entries(p).finish(),
        }
    }
}

const FD_STEP: f64 = 1e-4;

impl PathSpec {
    /// Reverse orientation.
    pub fn reversed(&self) -> PathSpec {
        match self {
            PathSpec::Linear { from, to } => PathSpec::Linear {
                from: to.clone(),
                to: from.clone(),
            },
            PathSpec::LogLinear { from, to } => PathSpec::LogLinear {
                from: to.clone(),
                to: from.clone(),
            },
            PathSpec::Curve { value, derivative } => {
                let v = value.clone();
                PathSpec::Curve {
                    value: Arc::new(move |t| v(1.0 - t)),
                    derivative: derivative
                        .clone()
                        .map(|d| -> CurveFn { Arc::new(move |t| d(1.0 - t).into_iter().map(|x| -x).collect()) }),
                }
            }
            PathSpec::Concat(p) => PathSpec::Concat(p.iter().rev().map(|q| q.reversed()).collect()),
        }
    }

    /// Point and derivative in length coordinates.
    pub fn eval(&self, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        match self {
            PathSpec::Linear { from, to } => {
                check_dims(from, to)?;
                let p = from.iter().zip(to).map(|(a, b)| lerp(*a, *b, t)).collect();
                let d = from
                    .iter()
                    .zip(to)
                    .map(|(a, b)| if a.is_finite() { b - a } else { 0.0 })
                    .collect();
                Ok((p, d))
            }
            PathSpec::LogLinear { from, to } => {
                check_dims(from, to)?;
                let mut p = Vec::with_capacity(from.len());
                let mut d = Vec::with_capacity(from.len());
                for (a, b) in from.iter().zip(to) {
                    if a.is_finite() {
                        let (la, lb) = (a.ln(), b.ln());
                        let x = ((1.0 - t) * la + t * lb).exp();
                        p.push(x);
                        d.push(x * (lb - la));
                    } else {
                        p.push(f64::INFINITY);
                        d.push(0.0);
                    }
                }
                Ok((p, d))
            }
            PathSpec::Curve { value, derivative } => {
                let p = value(t);
                let d = match derivative {
                    Some(df) => df(t),
                    None => {
                        let h = FD_STEP;
                        let (a, b, c, e) = (value(t - 2.0 * h), value(t - h), value(t + h), value(t + 2.0 * h));
                        (0..p.len())
                            .map(|i| {
                                if p[i].is_finite() {
                                    (a[i] - 8.0 * b[i] + 8.0 * c[i] - e[i]) / (12.0 * h)
                                } else {
                                    0.0
                                }
                            })
                            .collect()
                    }
                };
                Ok((p, d))
            }
            PathSpec::Concat(_) => domain("evaluate the pieces of a concatenated path individually"),
        }
    }
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    if a.is_finite() {
        a + t * (b - a)
    } else {
        a
    }
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return domain("path endpoints have different dimensions");
    }
    for (x, y) in a.iter().zip(b) {
        if x.is_finite() != y.is_finite() {
            return domain("path endpoints must share their finite support");
        }
    }
    Ok(())
}

/// Unit entropy point and velocity of the rescaled curve at `t`.
pub fn path_velocity(path: &PathSpec, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (l, dl) = path.eval(t)?;
    velocity(&l, &dl)
}

pub(crate) fn velocity(l: &[f64], dl: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if l.iter().any(|x| x.is_nan() || *x <= 0.0) || dl.iter().any(|x| !x.is_finite()) {
        return domain(format!("path left the space of positive length functions at {l:?}"));
    }
    let h = rose::entropy(l)?;
    let gamma: Vec<f64> = l.iter().map(|x| h * x).collect();
    let n = rose::normal(&gamma);
    let mut a = 0.0;
    let mut b = 0.0;
    for i in 0..l.len() {
        if l[i].is_finite() {
            a += n[i] * dl[i];
            b += n[i] * l[i];
        }
    }
    let r = a / b;
    let v = (0..l.len())
        .map(|i| if l[i].is_finite() { h * (dl[i] - r * l[i]) } else { 0.0 })
        .collect();
    Ok((gamma, v))
}

pub(crate) fn speed(l: &[f64], dl: &[f64]) -> Result<f64> {
    let (gamma, v) = velocity(l, dl)?;
    Ok(rose::norm_sq(&gamma, &v).max(0.0).sqrt())
}

/// Entropy length of the rescaled curve, by adaptive Gauss–Legendre.
pub fn path_length(path: &PathSpec, cfg: &QuadratureConfig) -> Result<f64> {
    if let PathSpec::Concat(pieces) = path {
        return pieces.iter().map(|p| path_length(p, cfg)).sum();
    }
    let err = RefCell::new(None);
    let f = |t: f64| -> f64 {
        match path.eval(t).and_then(|(l, dl)| speed(&l, &dl)) {
            Ok(s) => s,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let res = integrate_adaptive(f, 0.0, 1.0, cfg);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    res
}

/// Fixed composite rule; used inside optimizers where smoothness in the
/// parameters matters more than adaptivity.
pub(crate) fn path_length_fixed(path: &PathSpec, rule: &GaussLegendre, panels: usize) -> Result<f64> {
    if let PathSpec::Concat(pieces) = path {
        return pieces.iter().map(|p| path_length_fixed(p, rule, panels)).sum();
    }
    let mut err: Option<Error> = None;
    let v = rule.integrate(
        |t| match path.eval(t).and_then(|(l, dl)| speed(&l, &dl)) {
            Ok(s) => s,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        1.0,
        panels,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn constant_path_has_zero_length() {
        let p = PathSpec::Linear {
            from: vec![1.0, 2.0],
            to: vec![1.0, 2.0],
        };
        assert_eq!(path_length(&p, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn scaling_the_curve_does_not_change_length() {
        let a = PathSpec::Linear {
            from: vec![1.0, 2.0, 0.5],
            to: vec![0.3, 1.0, 2.0],
        };
        let b = PathSpec::Linear {
            from: vec![5.0, 10.0, 2.5],
            to: vec![1.5, 5.0, 10.0],
        };
        let la = path_length(&a, &cfg()).unwrap();
        let lb = path_length(&b, &cfg()).unwrap();
        assert!((la - lb).abs() < 1e-10 * la);
    }

    #[test]
    fn reparametrization_invariance() {
        let from = vec![1.0, 2.0, 0.5];
        let to = vec![0.3, 1.0, 2.0];
        let lin = PathSpec::Linear {
            from: from.clone(),
            to: to.clone(),
        };
        let (f2, t2) = (from.clone(), to.clone());
        let warped = PathSpec::Curve {
            value: Arc::new(move |t| {
                let s = t * t * (3.0 - 2.0 * t);
                f2.iter().zip(&t2).map(|(a, b)| a + s * (b - a)).collect()
            }),
            derivative: None,
        };
        let a = path_length(&lin, &cfg()).unwrap();
        let b = path_length(&warped, &cfg()).unwrap();
        assert!((a - b).abs() < 1e-9 * a, "{a} vs {b}");
    }

    #[test]
    fn concatenation_is_additive() {
        let p1 = PathSpec::LogLinear {
            from: vec![1.0, 2.0],
            to: vec![2.0, 1.0],
        };
        let p2 = PathSpec::Linear {
            from: vec![2.0, 1.0],
            to: vec![0.5, 3.0],
        };
        let whole = PathSpec::Concat(vec![p1.clone(), p2.clone()]);
        let s = path_length(&p1, &cfg()).unwrap() + path_length(&p2, &cfg()).unwrap();
        assert!((path_length(&whole, &cfg()).unwrap() - s).abs() < 1e-10 * s);
        let r = path_length(&whole.reversed(), &cfg()).unwrap();
        assert!((r - s).abs() < 1e-10 * s);
    }

    #[test]
    fn velocity_is_tangent() {
        let p = PathSpec::Linear {
            from: vec![1.0, 2.0, 0.5],
            to: vec![0.3, 1.0, 2.0],
        };
        for t in [0.0, 0.3, 1.0] {
            let (g, v) = path_velocity(&p, t).unwrap();
            assert!((rose::entropy(&g).unwrap() - 1.0).abs() < 1e-13);
            let n = rose::normal(&g);
            let pair: f64 = n.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(pair.abs() < 1e-13);
        }
    }

    // The rescaled curve's velocity matches a finite difference of the
    // rescaled points.
    #[test]
    fn velocity_matches_difference_of_normalized_points() {
        let p = PathSpec::LogLinear {
            from: vec![1.0, 2.0, 0.5],
            to: vec![0.3, 1.0, 2.0],
        };
        let t = 0.4;
        let s = 1e-5;
        let (_, v) = path_velocity(&p, t).unwrap();
        let (a, _) = path_velocity(&p, t + s).unwrap();
        let (b, _) = path_velocity(&p, t - s).unwrap();
        for i in 0..3 {
            let fd = (a[i] - b[i]) / (2.0 * s);
            assert!((fd - v[i]).abs() < 1e-8, "{fd} vs {}", v[i]);
        }
    }
}
