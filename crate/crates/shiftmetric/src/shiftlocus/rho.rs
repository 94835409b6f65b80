use super::segment::{height_segment, segment_entropy_length, twist_segment, Segment};
use crate::error::{domain, Result};
use crate::numeric::minimize::NelderMead;
use crate::numeric::quadrature::{GaussLegendre, QuadratureConfig};
use crate::polydyn::CriticalHeights;
use crate::rosemetric::DistanceBound;

#[derive(Debug, Clone, Copy)]
pub struct RhoConfig {
    /// Level `L` optimizes `2^L - 1` intermediate height vectors.
    pub levels: usize,
    pub optimizer: NelderMead,
    pub leg_order: usize,
    pub leg_panels: usize,
    pub quadrature: QuadratureConfig,
}

impl Default for RhoConfig {
    fn default() -> Self {
        RhoConfig {
            levels: 2,
            optimizer: NelderMead {
                initial_step: 0.05,
                f_tol: 1e-12,
                x_tol: 1e-8,
                max_evals: 4000,
                restarts: 1,
            },
            leg_order: 12,
            leg_panels: 2,
            quadrature: QuadratureConfig::default(),
        }
    }
}

const RATIO_CAP: f64 = 1.0 - 1e-12;

// Heights <-> unconstrained coordinates: log h1 and logits of successive ratios.
fn encode(h: &[f64]) -> Vec<f64> {
    let mut x = vec![h[0].ln()];
    for w in h.windows(2) {
        let r = (w[1] / w[0]).min(RATIO_CAP);
        x.push((r / (1.0 - r)).ln());
    }
    x
}

fn decode(x: &[f64]) -> Vec<f64> {
    let mut h = vec![x[0].exp()];
    for y in &x[1..] {
        let r = 1.0 / (1.0 + (-y).exp());
        let last = *h.last().unwrap();
        h.push(last * r);
    }
    h
}

fn leg(a: &[f64], b: &[f64], rule: &GaussLegendre, panels: usize) -> Result<f64> {
    let seg = height_segment(&CriticalHeights::new(a.to_vec())?, &CriticalHeights::new(b.to_vec())?)?;
    crate::rosemetric::path_length_fixed(&seg.piece(0.0, 1.0), rule, panels)
}

fn polygon_exact(nodes: &[Vec<f64>], cfg: &QuadratureConfig) -> Result<f64> {
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let seg = height_segment(
            &CriticalHeights::new(w[0].clone())?,
            &CriticalHeights::new(w[1].clone())?,
        )?;
        total += segment_entropy_length(&Segment::Height(seg), cfg)?;
    }
    Ok(total)
}

/// Upper bound on the pulled-back distance between two shift-locus points
/// given by heights and optional twist coordinates (missing twists are 0).
pub fn rho_upper(
    a: &CriticalHeights,
    b: &CriticalHeights,
    twist_a: Option<&[f64]>,
    twist_b: Option<&[f64]>,
    cfg: &RhoConfig,
) -> Result<DistanceBound> {
    if a.degree() != b.degree() {
        return domain("endpoints have different degrees");
    }
    let k = a.as_slice().len();
    let zeros = vec![0.0; k];
    let ta = twist_a.unwrap_or(&zeros);
    let tb = twist_b.unwrap_or(&zeros);

    // A twist move at either end; the cheaper one is used.
    let twist_cost = if ta == tb {
        0.0
    } else {
        let at_a = segment_entropy_length(&Segment::Twist(twist_segment(a, ta, tb)?), &cfg.quadrature)?;
        let at_b = segment_entropy_length(&Segment::Twist(twist_segment(b, ta, tb)?), &cfg.quadrature)?;
        at_a.min(at_b)
    };

    let ha = a.as_slice().to_vec();
    let hb = b.as_slice().to_vec();
    let chord = if ha == hb {
        0.0
    } else {
        polygon_exact(&[ha.clone(), hb.clone()], &cfg.quadrature)?
    };
    let mut per_level = vec![chord];
    let mut stagnated = false;
    if chord > 0.0 {
        let rule = GaussLegendre::new(cfg.leg_order);
        let mut interior: Vec<Vec<f64>> = Vec::new();
        for _ in 0..cfg.levels {
            let mut nodes = vec![ha.clone()];
            nodes.extend(interior.iter().cloned());
            nodes.push(hb.clone());
            let mut refined = Vec::new();
            for (i, w) in nodes.windows(2).enumerate() {
                if i > 0 {
                    refined.push(w[0].clone());
                }
                refined.push(w[0].iter().zip(&w[1]).map(|(x, y)| 0.5 * (x + y)).collect());
            }
            interior = refined;
            let m = interior.len();
            let unpack = |x: &[f64]| -> Vec<Vec<f64>> {
                let mut pts = vec![ha.clone()];
                pts.extend((0..m).map(|j| decode(&x[j * k..(j + 1) * k])));
                pts.push(hb.clone());
                pts
            };
            let objective = |x: &[f64]| -> f64 {
                let pts = unpack(x);
                let mut total = 0.0;
                for w in pts.windows(2) {
                    match leg(&w[0], &w[1], &rule, cfg.leg_panels) {
                        Ok(v) if v.is_finite() => total += v,
                        _ => return f64::INFINITY,
                    }
                }
                total
            };
            let x0: Vec<f64> = interior.iter().flat_map(|h| encode(h)).collect();
            let best = cfg.optimizer.minimize(objective, &x0);
            stagnated |= best.exhausted;
            let candidate = unpack(&best.x);
            let exact = polygon_exact(&candidate, &cfg.quadrature)?;
            let prev = *per_level.last().unwrap();
            if exact < prev {
                interior = candidate[1..=m].to_vec();
                per_level.push(exact);
            } else {
                per_level.push(prev);
            }
        }
    }
    for v in per_level.iter_mut() {
        *v += twist_cost;
    }
    Ok(DistanceBound {
        value: *per_level.last().unwrap(),
        per_level,
        stagnated,
    })
}
