use super::MetricGraph;
use crate::error::{domain, Result};

/// `A(e, e') exp(-phi(e))` on directed edges. `phi = +inf` gives a zero row.
pub fn weighted_matrix(g: &MetricGraph, phi: &[f64]) -> Result<Vec<Vec<f64>>> {
    let m = g.directed_count();
    if phi.len() != m {
        return domain(format!(
            "potential has {} entries, graph has {m} directed edges",
            phi.len()
        ));
    }
    if phi.iter().any(|p| p.is_nan() || *p == f64::NEG_INFINITY) {
        return domain("potential must be real or +inf");
    }
    Ok((0..m)
        .map(|e| {
            let w = (-phi[e]).exp();
            (0..m).map(|f| if g.follows(e, f) { w } else { 0.0 }).collect()
        })
        .collect())
}

/// Perron root of a nonnegative square matrix.
///
/// Power iteration from the all-ones vector, stopped when the Collatz–Wielandt
/// bounds `min (Ax)_i / x_i <= rho <= max (Ax)_i / x_i` meet. Rows that lead
/// only to zero rows are transient and dropped first.
pub fn spectral_radius(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    // Prune states whose rows vanish on the surviving states.
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            if alive[i] && !(0..n).any(|j| alive[j] && a[i][j] > 0.0) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let idx: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    if idx.is_empty() {
        return 0.0;
    }
    let b: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect();
    perron(&b)
}

fn perron(b: &[Vec<f64>]) -> f64 {
    let n = b.len();
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    // A positive shift makes periodic matrices primitive; it is only used if
    // the plain iteration stalls.
    let mut shift = 0.0;
    for iter in 0..200_000 {
        if iter == 20_000 {
            shift = if hi.is_finite() { 0.5 * (lo + hi) } else { 1.0 };
        }
        for i in 0..n {
            let mut s = shift * x[i];
            for (bij, xj) in b[i].iter().zip(&x) {
                s += bij * xj;
            }
            y[i] = s;
        }
        let mut cur_lo = f64::INFINITY;
        let mut cur_hi: f64 = 0.0;
        for i in 0..n {
            let r = y[i] / x[i];
            cur_lo = cur_lo.min(r);
            cur_hi = cur_hi.max(r);
        }
        lo = cur_lo - shift;
        hi = cur_hi - shift;
        let norm = y.iter().cloned().fold(0.0, f64::max);
        if norm == 0.0 || !norm.is_finite() {
            return 0.0;
        }
        for i in 0..n {
            // Floor keeps the Collatz–Wielandt ratios defined.
            x[i] = (y[i] / norm).max(1e-300);
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `log rho(A(e, e') exp(phi(e)))`; `-inf` when the matrix is nilpotent.
pub fn pressure(g: &MetricGraph, phi: &[f64]) -> Result<f64> {
    let neg: Vec<f64> = phi.iter().map(|p| -p).collect();
    let a = weighted_matrix(g, &neg)?;
    let r = spectral_radius(&a);
    Ok(if r > 0.0 { r.ln() } else { f64::NEG_INFINITY })
}
