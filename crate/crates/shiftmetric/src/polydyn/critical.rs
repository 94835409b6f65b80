use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct CriticalPointConfig {
    /// Roots closer than this are merged into one point with multiplicity.
    pub cluster_tol: f64,
    pub max_iter: usize,
}

impl Default for CriticalPointConfig {
    fn default() -> Self {
        CriticalPointConfig {
            cluster_tol: 1e-8,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub z: Complex64,
    pub multiplicity: usize,
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Zeros of `f'` with multiplicity; multiplicities add up to `D - 1`.
pub fn critical_points(f: &Polynomial, cfg: &CriticalPointConfig) -> Result<Vec<CriticalPoint>> {
    let d = f.degree() as f64;
    let monic: Vec<Complex64> = f.derivative_coeffs().into_iter().map(|c| c / d).collect();
    let roots = aberth(&monic, cfg)?;
    let clusters = cluster(&roots, cfg.cluster_tol);

    let scale = |z: Complex64| -> f64 {
        let r = z.norm();
        monic
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() * r.powi((monic.len() - 1 - i) as i32))
            .sum()
    };
    let mut out = Vec::with_capacity(clusters.len());
    let mut residuals = Vec::new();
    let mut failed = false;
    for (mut z, m) in clusters {
        if m == 1 {
            for _ in 0..3 {
                let (p, dp) = horner(&monic, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                z -= step;
                if step.norm() <= f64::EPSILON * z.norm() {
                    break;
                }
            }
            let (p, _) = horner(&monic, z);
            let bound = 64.0 * monic.len() as f64 * f64::EPSILON * scale(z);
            residuals.push(p.norm());
            if p.norm() > bound.max(f64::MIN_POSITIVE) {
                failed = true;
            }
        }
        out.push(CriticalPoint { z, multiplicity: m });
    }
    if failed {
        return Err(Error::SolverFailure { residuals });
    }
    Ok(out)
}

/// Aberth–Ehrlich iteration for all roots of a monic polynomial given highest
/// power first.
fn aberth(monic: &[Complex64], cfg: &CriticalPointConfig) -> Result<Vec<Complex64>> {
    let m = monic.len() - 1;
    if m == 0 {
        return Ok(vec![]);
    }
    if m == 1 {
        return Ok(vec![-monic[1]]);
    }
    // Cauchy-type bound on the root moduli.
    let radius = monic[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| 2.0 * c.norm().powf(1.0 / (i + 1) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4))
        .collect();
    let mut last_step = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        last_step = 0.0;
        for i in 0..m {
            let (p, dp) = horner(monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..m {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let w = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                last_step = last_step.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if last_step <= 4.0 * f64::EPSILON {
            return Ok(z);
        }
    }
    // Clustered roots converge linearly; accept once they sit well inside
    // the merge radius.
    if last_step <= 1e-3 * cfg.cluster_tol {
        return Ok(z);
    }
    Err(Error::SolverFailure {
        residuals: z.iter().map(|&zi| horner(monic, zi).0.norm()).collect(),
    })
}

fn cluster(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &z) in roots.iter().enumerate().take(n) {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += z;
                g.2 += 1;
            }
            None => groups.push((r, z, 1)),
        }
    }
    groups.into_iter().map(|(_, s, m)| (s / m as f64, m)).collect()
}
