use std::f64::consts::PI;

use super::{critical_points, green_function, CriticalPoint, CriticalPointConfig, GreenConfig, Polynomial};
use crate::error::{domain, Result};

pub const DEFAULT_SHIFT_EPS: f64 = 1e-12;
pub const DEFAULT_RATIO_TOL: f64 = 1e-9;

/// Escape rates of the critical points, counted with multiplicity and sorted
/// nonincreasing. The degree is `len + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalHeights(Vec<f64>);

impl CriticalHeights {
    pub fn new(heights: Vec<f64>) -> Result<Self> {
        if heights.is_empty() {
            return domain("need at least one critical height");
        }
        if heights.iter().any(|h| !h.is_finite() || *h < 0.0) {
            return domain(format!("heights must be finite and nonnegative: {heights:?}"));
        }
        if heights.windows(2).any(|w| w[0] < w[1]) {
            return domain(format!("heights must be nonincreasing: {heights:?}"));
        }
        Ok(CriticalHeights(heights))
    }

    pub fn from_unsorted(mut heights: Vec<f64>) -> Result<Self> {
        heights.sort_by(|a, b| b.total_cmp(a));
        Self::new(heights)
    }

    pub fn degree(&self) -> usize {
        self.0.len() + 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn min(&self) -> f64 {
        *self.0.last().unwrap()
    }
}

pub fn heights_from_points(f: &Polynomial, points: &[CriticalPoint], cfg: &GreenConfig) -> Result<CriticalHeights> {
    let mut hs = Vec::with_capacity(f.degree() - 1);
    for p in points {
        let g = green_function(f, p.z, cfg)?;
        hs.extend(std::iter::repeat_n(g, p.multiplicity));
    }
    if hs.len() != f.degree() - 1 {
        return domain("critical point multiplicities do not add up to D - 1");
    }
    CriticalHeights::from_unsorted(hs)
}

pub fn critical_heights(f: &Polynomial, cfg: &GreenConfig) -> Result<CriticalHeights> {
    let pts = critical_points(f, &CriticalPointConfig::default())?;
    heights_from_points(f, &pts, cfg)
}

/// All critical points escape.
pub fn is_shift_locus(h: &CriticalHeights, eps: f64) -> bool {
    h.min() > eps
}

/// Shift locus and no two heights differ by an integer power of `d`.
///
/// `d` is explicit so ratio tests can be run on any height list.
pub fn is_generic(h: &CriticalHeights, d: usize, ratio_tol: f64) -> bool {
    if !is_shift_locus(h, DEFAULT_SHIFT_EPS) {
        return false;
    }
    let ln_d = (d as f64).ln();
    let hs = h.as_slice();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let x = (hs[i] / hs[j]).ln() / ln_d;
            if (x - x.round()).abs() <= ratio_tol {
                return false;
            }
        }
    }
    true
}

/// Fundamental annulus `[h1, D h1)` cut at the representatives of all heights.
#[derive(Debug, Clone, PartialEq)]
pub struct Subannuli {
    /// Increasing, from `h1` to `D h1`.
    pub boundaries: Vec<f64>,
    /// `(b_{j+1} - b_j) / 2 pi`.
    pub moduli: Vec<f64>,
}

impl Subannuli {
    pub fn count(&self) -> usize {
        self.moduli.len()
    }
}

pub fn subannuli(h: &CriticalHeights) -> Result<Subannuli> {
    if !is_shift_locus(h, DEFAULT_SHIFT_EPS) {
        return domain("subannuli need all critical heights positive");
    }
    let d = h.degree() as f64;
    let h1 = h.max();
    let top = d * h1;
    let merge = 1e-12 * h1;
    let mut cuts = vec![h1, top];
    for &hj in &h.as_slice()[1..] {
        let k = ((h1 / hj).ln() / d.ln()).ceil();
        let mut r = hj * d.powf(k);
        while r >= top - merge {
            r /= d;
        }
        while r < h1 - merge {
            r *= d;
        }
        cuts.push(r);
    }
    cuts.sort_by(f64::total_cmp);
    let mut boundaries: Vec<f64> = Vec::with_capacity(cuts.len());
    for c in cuts {
        match boundaries.last() {
            Some(&last) if c - last <= merge => {}
            _ => boundaries.push(c),
        }
    }
    // Keep the endpoints exact.
    boundaries[0] = h1;
    let n = boundaries.len();
    if (boundaries[n - 1] - top).abs() <= merge {
        boundaries[n - 1] = top;
    } else {
        boundaries.push(top);
    }
    let moduli = boundaries.windows(2).map(|w| (w[1] - w[0]) / (2.0 * PI)).collect();
    Ok(Subannuli { boundaries, moduli })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn hs(v: &[f64]) -> CriticalHeights {
        CriticalHeights::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sorted_invariant() {
        assert!(CriticalHeights::new(vec![1.0, 2.0]).is_err());
        assert_eq!(
            CriticalHeights::from_unsorted(vec![1.0, 2.0]).unwrap().as_slice(),
            &[2.0, 1.0]
        );
    }

    #[test]
    fn shift_locus_membership() {
        assert!(is_shift_locus(&hs(&[2.0, 1.0]), DEFAULT_SHIFT_EPS));
        assert!(!is_shift_locus(&hs(&[1.0, 0.0]), DEFAULT_SHIFT_EPS));
    }

    #[test]
    fn genericity() {
        assert!(!is_generic(&hs(&[1.0, 1.0, 0.0]), 4, DEFAULT_RATIO_TOL));
        assert!(!is_generic(&hs(&[1.0, 0.5]), 2, DEFAULT_RATIO_TOL));
        assert!(!is_generic(&hs(&[1.0, 1.0]), 3, DEFAULT_RATIO_TOL));
        assert!(is_generic(&hs(&[2.0, 1.0]), 3, DEFAULT_RATIO_TOL));
        assert!(!is_generic(&hs(&[9.0, 1.0]), 3, DEFAULT_RATIO_TOL));
        assert!(is_generic(&hs(&[1.0, 0.5]), 3, DEFAULT_RATIO_TOL));
    }

    #[test]
    fn subannuli_example() {
        let s = subannuli(&hs(&[2.0, 1.0])).unwrap();
        assert_eq!(s.boundaries, vec![2.0, 3.0, 6.0]);
        assert_eq!(s.count(), 2);
    }

    #[test]
    fn subannuli_moduli_sum() {
        for v in [vec![5.0, 0.3, 0.01], vec![1.0, 0.25, 0.0625], vec![3.0, 3.0, 1.0, 0.2]] {
            let h = hs(&v);
            let s = subannuli(&h).unwrap();
            let d = h.degree() as f64;
            let total: f64 = s.moduli.iter().sum();
            assert!((total - (d - 1.0) * v[0] / (2.0 * PI)).abs() < 1e-12 * v[0]);
            assert!(s.count() < h.degree());
            assert!(s.moduli.iter().all(|m| *m > 0.0));
        }
        // Heights in the same D-orbit collapse to one boundary.
        assert_eq!(subannuli(&hs(&[1.0, 0.25, 0.0625])).unwrap().count(), 1);
    }

    #[test]
    fn power_map_heights_are_zero() {
        let h = critical_heights(&Polynomial::power(3).unwrap(), &GreenConfig::default()).unwrap();
        assert_eq!(h.as_slice(), &[0.0, 0.0]);
        assert!(!is_shift_locus(&h, DEFAULT_SHIFT_EPS));
    }

    #[test]
    fn quadratic_heights() {
        let c = Complex64::new(0.0, 1e6);
        let h = critical_heights(&Polynomial::quadratic(c), &GreenConfig::default()).unwrap();
        assert!((h.max() - 0.5 * 1e6f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn shuffled_points_give_same_heights() {
        let f = Polynomial::new(
            4,
            vec![
                Complex64::new(3.0, 1.0),
                Complex64::new(-5.0, 2.0),
                Complex64::new(1.0, -4.0),
            ],
        )
        .unwrap();
        let mut pts = critical_points(&f, &Default::default()).unwrap();
        let a = heights_from_points(&f, &pts, &GreenConfig::default()).unwrap();
        pts.reverse();
        pts.rotate_left(1);
        let b = heights_from_points(&f, &pts, &GreenConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
