use crate::error::{Error, Result};

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre polynomial of degree `n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integral of `f` over [a, b] split into `panels` equal pieces.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(mid + 0.5 * h * x);
            }
            total += 0.5 * h * s;
        }
        total
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Settings for adaptive composite quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub order: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on the number of intervals examined.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            order: 10,
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_panels: 1 << 14,
        }
    }
}

/// Gauss–Legendre with local bisection: an interval is accepted once its
/// one-panel and two-panel estimates agree to its share of the tolerance.
/// Kinks (for instance a speed passing through zero) only refine locally.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let rule = GaussLegendre::new(cfg.order);
    let whole = rule.integrate(&mut f, a, b, 1);
    let halves = rule.integrate(&mut f, a, b, 2);
    if !halves.is_finite() {
        return Err(Error::Accuracy {
            coarse: whole,
            fine: halves,
        });
    }
    let width = b - a;
    let mut stack = vec![(a, b, whole)];
    let (mut coarse_total, mut fine_total) = (0.0, 0.0);
    let mut scale = halves.abs();
    let mut examined = 0;
    while let Some((lo, hi, coarse)) = stack.pop() {
        examined += 1;
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(&mut f, lo, mid, 1);
        let right = rule.integrate(&mut f, mid, hi, 1);
        let fine = left + right;
        if !fine.is_finite() {
            return Err(Error::Accuracy { coarse, fine });
        }
        scale = scale.max((fine_total + fine).abs());
        let share = (hi - lo) / width;
        let tol = cfg.abs_tol.max(cfg.rel_tol * scale) * share;
        if (fine - coarse).abs() <= tol || mid <= lo || mid >= hi {
            coarse_total += coarse;
            fine_total += fine;
        } else if examined >= cfg.max_panels {
            return Err(Error::Accuracy {
                coarse: coarse_total + coarse + stack.iter().map(|s| s.2).sum::<f64>(),
                fine: fine_total + fine + stack.iter().map(|s| s.2).sum::<f64>(),
            });
        } else {
            stack.push((mid, hi, right));
            stack.push((lo, mid, left));
        }
    }
    Ok(fine_total)
}
