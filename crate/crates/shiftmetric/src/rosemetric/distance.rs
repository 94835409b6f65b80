use super::path::{path_length, speed, PathSpec};
use super::{rose, UNIT_ENTROPY_TOL};
use crate::error::{domain, Error, Result};
use crate::numeric::minimize::NelderMead;
use crate::numeric::quadrature::{GaussLegendre, QuadratureConfig};

#[derive(Debug, Clone, Copy)]
pub struct DistanceConfig {
    /// Refinement levels after the straight chord; level `L` optimizes
    /// `2^L - 1` interior control points.
    pub levels: usize,
    pub optimizer: NelderMead,
    /// Gauss–Legendre order and panels per leg inside the optimizer.
    pub leg_order: usize,
    pub leg_panels: usize,
    /// Final evaluation of each candidate polygon.
    pub quadrature: QuadratureConfig,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            levels: 2,
            optimizer: NelderMead {
                initial_step: 0.05,
                f_tol: 1e-12,
                x_tol: 1e-8,
                max_evals: 6000,
                restarts: 2,
            },
            leg_order: 12,
            leg_panels: 2,
            quadrature: QuadratureConfig::default(),
        }
    }
}

/// Upper bound on the entropy-metric distance.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceBound {
    /// Best length found; always an upper bound, never an estimate from below.
    pub value: f64,
    /// Bound after each refinement level; nonincreasing.
    pub per_level: Vec<f64>,
    /// Set when the optimizer ran out of evaluations at some level.
    pub stagnated: bool,
}

fn leg_length(u: &[f64], v: &[f64], rule: &GaussLegendre, panels: usize) -> Result<f64> {
    let diff: Vec<f64> = u.iter().zip(v).map(|(a, b)| b - a).collect();
    let mut err = None;
    let val = rule.integrate(
        |t| {
            let l: Vec<f64> = u.iter().zip(&diff).map(|(a, d)| (a + t * d).exp()).collect();
            let dl: Vec<f64> = l.iter().zip(&diff).map(|(x, d)| x * d).collect();
            match speed(&l, &dl) {
                Ok(s) => s,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        1.0,
        panels,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(val),
    }
}

fn polygon_exact(nodes: &[Vec<f64>], cfg: &QuadratureConfig) -> Result<f64> {
    let legs = nodes
        .windows(2)
        .map(|w| PathSpec::LogLinear {
            from: w[0].iter().map(|x| x.exp()).collect(),
            to: w[1].iter().map(|x| x.exp()).collect(),
        })
        .collect();
    path_length(&PathSpec::Concat(legs), cfg)
}

fn centered_log(x: &[f64]) -> Vec<f64> {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let mean = lx.iter().sum::<f64>() / lx.len() as f64;
    lx.iter().map(|v| v - mean).collect()
}

/// Upper bound on the distance between two unit entropy rose length functions,
/// by minimizing the length of piecewise log-linear paths.
pub fn distance_upper(a: &[f64], b: &[f64], cfg: &DistanceConfig) -> Result<DistanceBound> {
    if a.len() != b.len() {
        return domain("endpoints have different dimensions");
    }
    for x in [a, b] {
        let h = rose::entropy(x)?;
        if (h - 1.0).abs() > UNIT_ENTROPY_TOL {
            return Err(Error::NotUnitEntropy { entropy: h });
        }
    }
    let support: Vec<usize> = (0..a.len()).filter(|&i| a[i].is_finite()).collect();
    if support.iter().any(|&i| !b[i].is_finite()) || b.iter().filter(|x| x.is_finite()).count() != support.len() {
        return domain("endpoints must have the same finite support");
    }
    let a: Vec<f64> = support.iter().map(|&i| a[i]).collect();
    let b: Vec<f64> = support.iter().map(|&i| b[i]).collect();
    let n = a.len();
    let (ua, ub) = (centered_log(&a), centered_log(&b));

    let chord = polygon_exact(&[ua.clone(), ub.clone()], &cfg.quadrature)?;
    let mut per_level = vec![chord];
    let mut stagnated = false;
    if chord == 0.0 {
        return Ok(DistanceBound {
            value: 0.0,
            per_level,
            stagnated,
        });
    }

    let rule = GaussLegendre::new(cfg.leg_order);
    let mut interior: Vec<Vec<f64>> = Vec::new();
    for _ in 0..cfg.levels {
        // Midpoint insertion leaves the curve unchanged, so each level starts
        // from the previous optimum.
        let mut nodes = vec![ua.clone()];
        nodes.extend(interior.iter().cloned());
        nodes.push(ub.clone());
        let mut refined = Vec::new();
        for (i, w) in nodes.windows(2).enumerate() {
            if i > 0 {
                refined.push(w[0].clone());
            }
            refined.push(w[0].iter().zip(&w[1]).map(|(x, y)| 0.5 * (x + y)).collect());
        }
        interior = refined;

        let k = interior.len();
        let unpack = |x: &[f64]| -> Vec<Vec<f64>> {
            let mut pts = vec![ua.clone()];
            for j in 0..k {
                let mut p: Vec<f64> = x[j * (n - 1)..(j + 1) * (n - 1)].to_vec();
                p.push(-p.iter().sum::<f64>());
                pts.push(p);
            }
            pts.push(ub.clone());
            pts
        };
        let objective = |x: &[f64]| -> f64 {
            let pts = unpack(x);
            let mut total = 0.0;
            for w in pts.windows(2) {
                match leg_length(&w[0], &w[1], &rule, cfg.leg_panels) {
                    Ok(v) if v.is_finite() => total += v,
                    _ => return f64::INFINITY,
                }
            }
            total
        };
        let x0: Vec<f64> = interior.iter().flat_map(|p| p[..n - 1].to_vec()).collect();
        let best = cfg.optimizer.minimize(objective, &x0);
        stagnated |= best.exhausted;
        let candidate = unpack(&best.x);
        let exact = polygon_exact(&candidate, &cfg.quadrature)?;
        let prev = *per_level.last().unwrap();
        if exact < prev {
            interior = candidate[1..=k].to_vec();
            per_level.push(exact);
        } else {
            per_level.push(prev);
        }
    }
    Ok(DistanceBound {
        value: *per_level.last().unwrap(),
        per_level,
        stagnated,
    })
}
