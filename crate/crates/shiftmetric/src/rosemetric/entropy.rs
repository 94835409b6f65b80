use nalgebra::DMatrix;

use super::{rose, spectral_radius, weighted_matrix, LengthFunction, MetricGraph};
use crate::error::{domain, Error, Result};
use crate::numeric::roots::brent;

/// Largest rose for which the subset sum is evaluated.
const CLOSED_MAX_PETALS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropyMethod {
    /// Root of `sum over nonempty petal sets S of (2|S| - 1) exp(-h l(S)) = 1` (roses only).
    Closed,
    /// Root of `h -> log rho(A exp(-h l))`.
    Spectral,
    /// Root of the reduced rose determinant `det(I_n - Abar(h l))` (roses only).
    Determinant,
}

impl EntropyMethod {
    pub const ALL: [EntropyMethod; 3] = [
        EntropyMethod::Closed,
        EntropyMethod::Spectral,
        EntropyMethod::Determinant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntropyMethod::Closed => "closed",
            EntropyMethod::Spectral => "spectral",
            EntropyMethod::Determinant => "det",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "closed" => Some(EntropyMethod::Closed),
            "spectral" => Some(EntropyMethod::Spectral),
            "det" | "determinant" => Some(EntropyMethod::Determinant),
            _ => None,
        }
    }
}

pub fn entropy(g: &MetricGraph, l: &LengthFunction, method: EntropyMethod) -> Result<f64> {
    l.check_graph(g)?;
    let finite: Vec<f64> = l.as_slice().iter().cloned().filter(|x| x.is_finite()).collect();
    if g.is_rose() && finite.len() < 2 {
        return Err(Error::DegenerateEntropy {
            finite_petals: finite.len(),
        });
    }
    match method {
        EntropyMethod::Closed => {
            if !g.is_rose() {
                return domain("closed entropy formula is for roses");
            }
            closed(&finite)
        }
        EntropyMethod::Determinant => {
            if !g.is_rose() {
                return domain("reduced determinant is for roses");
            }
            determinant(&finite)
        }
        EntropyMethod::Spectral => spectral(g, l),
    }
}

/// Entropy by every method that applies to the graph.
pub fn entropy_all(g: &MetricGraph, l: &LengthFunction) -> Result<Vec<(EntropyMethod, f64)>> {
    let methods: &[EntropyMethod] = if g.is_rose() {
        if l.finite_count() <= CLOSED_MAX_PETALS {
            &EntropyMethod::ALL
        } else {
            &[EntropyMethod::Spectral, EntropyMethod::Determinant]
        }
    } else {
        &[EntropyMethod::Spectral]
    };
    methods.iter().map(|&m| Ok((m, entropy(g, l, m)?))).collect()
}

/// `entropy(l) * l`.
pub fn normalize_unit_entropy(g: &MetricGraph, l: &LengthFunction) -> Result<LengthFunction> {
    let h = if g.is_rose() {
        l.check_graph(g)?;
        rose::entropy(l.as_slice())?
    } else {
        entropy(g, l, EntropyMethod::Spectral)?
    };
    Ok(l.scaled(h))
}

fn rose_bracket(finite: &[f64]) -> (f64, f64) {
    let lmin = finite.iter().cloned().fold(f64::INFINITY, f64::min);
    let lmax = finite.iter().cloned().fold(0.0, f64::max);
    let base = ((2 * finite.len() - 1) as f64).ln();
    (base / lmax, base / lmin)
}

fn closed(finite: &[f64]) -> Result<f64> {
    let n = finite.len();
    if n > CLOSED_MAX_PETALS {
        return Err(Error::TooLarge {
            what: "closed entropy formula petal count",
            size: n,
            cap: CLOSED_MAX_PETALS,
        });
    }
    // l(S) and 2|S| - 1 for every nonempty subset, built by adding one petal at a time.
    let total = 1usize << n;
    let mut len_s = vec![0.0; total];
    let mut coef = vec![0.0; total];
    for s in 1..total {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        len_s[s] = len_s[rest] + finite[low];
        coef[s] = (2 * s.count_ones() - 1) as f64;
    }
    let eval = |h: f64| -> (f64, f64) {
        let mut g = -1.0;
        let mut dg = 0.0;
        for s in 1..total {
            let t = coef[s] * (-h * len_s[s]).exp();
            g += t;
            dg -= len_s[s] * t;
        }
        (g, dg)
    };
    let (start, _) = rose_bracket(finite);
    let mut lo = start;
    let mut hi = 2.0 * start;
    while eval(hi).0 > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut h = lo;
    for _ in 0..200 {
        let (gv, dg) = eval(h);
        if gv == 0.0 {
            return Ok(h);
        }
        if gv > 0.0 {
            lo = lo.max(h);
        } else {
            hi = hi.min(h);
        }
        let mut next = h - gv / dg;
        if !(next >= lo && next <= hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - h).abs() <= 4.0 * f64::EPSILON * h {
            return Ok(next);
        }
        h = next;
    }
    Err(Error::SolverFailure {
        residuals: vec![eval(h).0],
    })
}

fn widened(finite: &[f64]) -> (f64, f64) {
    let (lo, hi) = rose_bracket(finite);
    (lo * (1.0 - 1e-9), hi * (1.0 + 1e-9))
}

fn determinant(finite: &[f64]) -> Result<f64> {
    let n = finite.len();
    let f = |h: f64| -> f64 {
        let m = DMatrix::from_fn(n, n, |i, j| {
            let w = (-h * finite[i]).exp();
            let a = if i == j { w } else { 2.0 * w };
            if i == j {
                1.0 - a
            } else {
                -a
            }
        });
        m.determinant()
    };
    let (lo, hi) = widened(finite);
    brent(f, lo, hi, 1e-16 * hi, 200)
}

fn spectral(g: &MetricGraph, l: &LengthFunction) -> Result<f64> {
    let m = g.directed_count();
    let p = |h: f64| -> f64 {
        let phi: Vec<f64> = (0..m).map(|e| h * l.directed(e)).collect();
        let a = weighted_matrix(g, &phi).expect("sizes match");
        let r = spectral_radius(&a);
        if r > 0.0 {
            r.ln()
        } else {
            f64::NEG_INFINITY
        }
    };
    let (lo, hi) = if g.is_rose() {
        let finite: Vec<f64> = l.as_slice().iter().cloned().filter(|x| x.is_finite()).collect();
        widened(&finite)
    } else {
        if p(0.0) <= 0.0 {
            return Err(Error::DegenerateEntropy {
                finite_petals: l.finite_count(),
            });
        }
        let lmin = l.as_slice().iter().cloned().fold(f64::INFINITY, f64::min);
        let mut lo = 1.0 / lmin;
        while p(lo) < 0.0 {
            lo *= 0.5;
        }
        let mut hi = 2.0 * lo;
        while p(hi) > 0.0 {
            hi *= 2.0;
        }
        (lo, hi)
    };
    brent(p, lo, hi, 1e-16 * hi, 200)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lf(v: &[f64]) -> LengthFunction {
        LengthFunction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rose_two_at_log3() {
        let g = MetricGraph::rose(2).unwrap();
        let l = lf(&[3f64.ln(), 3f64.ln()]);
        for m in EntropyMethod::ALL {
            assert!((entropy(&g, &l, m).unwrap() - 1.0).abs() < 1e-12, "{m:?}");
        }
    }

    #[test]
    fn methods_agree_on_random_roses() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 3, 5, 7] {
            let g = MetricGraph::rose(n).unwrap();
            for _ in 0..10 {
                let l = lf(&(0..n).map(|_| rng.gen_range(-3.0f64..3.0).exp()).collect::<Vec<_>>());
                let vals: Vec<f64> = EntropyMethod::ALL
                    .iter()
                    .map(|&m| entropy(&g, &l, m).unwrap())
                    .collect();
                let fast = rose::entropy(l.as_slice()).unwrap();
                for v in &vals {
                    assert!((v - fast).abs() < 1e-11 * fast, "{vals:?} vs {fast}");
                }
            }
        }
    }

    #[test]
    fn extended_drops_infinite_petals() {
        let g4 = MetricGraph::rose(4).unwrap();
        let g2 = MetricGraph::rose(2).unwrap();
        let l = LengthFunction::extended(vec![0.5, f64::INFINITY, 1.5, f64::INFINITY]).unwrap();
        let want = entropy(&g2, &lf(&[0.5, 1.5]), EntropyMethod::Closed).unwrap();
        for m in EntropyMethod::ALL {
            assert!((entropy(&g4, &l, m).unwrap() - want).abs() < 1e-12);
        }
        let bad = LengthFunction::extended(vec![0.5, f64::INFINITY, f64::INFINITY, f64::INFINITY]).unwrap();
        assert!(matches!(
            entropy(&g4, &bad, EntropyMethod::Spectral),
            Err(Error::DegenerateEntropy { .. })
        ));
    }

    #[test]
    fn theta_graph_spectral() {
        // Theta graph with all lengths 1: each directed edge has 2 successors.
        let g = MetricGraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let h = entropy(&g, &lf(&[1.0, 1.0, 1.0]), EntropyMethod::Spectral).unwrap();
        assert!((h - 2f64.ln()).abs() < 1e-12);
        assert!(entropy(&g, &lf(&[1.0, 1.0, 1.0]), EntropyMethod::Closed).is_err());
    }

    #[test]
    fn normalization() {
        let g = MetricGraph::rose(3).unwrap();
        let l = lf(&[0.2, 1.0, 4.0]);
        let lhat = normalize_unit_entropy(&g, &l).unwrap();
        assert!((entropy(&g, &lhat, EntropyMethod::Spectral).unwrap() - 1.0).abs() < 1e-12);
    }
}
