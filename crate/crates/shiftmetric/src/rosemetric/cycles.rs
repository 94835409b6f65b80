use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::{LengthFunction, MetricGraph};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_PETALS: usize = 4;
/// Directed-edge cap for graphs that are not roses.
const MAX_DIRECTED_EDGES: usize = 8;
const MAX_SIMPLICES: usize = 5_000_000;

/// Nonempty collection of pairwise disjoint simple cycles of the edge
/// transition graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex {
    /// Indices into [`CycleComplex::cycles`].
    pub cycles: Vec<u32>,
    /// Per unoriented edge `e`: how many of `e`, `reverse(e)` the cycles use (0, 1 or 2).
    pub counts: Vec<u8>,
}

/// Simple cycles of the graph whose vertices are directed edges and whose
/// arcs are reduced transitions, together with all their disjoint
/// collections.
#[derive(Debug, Clone)]
pub struct CycleComplex {
    pub cycles: Vec<Vec<usize>>,
    pub simplices: Vec<Simplex>,
    edge_count: usize,
    /// Simplices grouped by `counts`, with the summed sign `(-1)^{#cycles}`.
    terms: Vec<(Vec<u8>, i64)>,
}

impl CycleComplex {
    pub fn build(g: &MetricGraph, max_petals: usize) -> Result<Self> {
        let m = g.directed_count();
        if g.is_rose() && g.edge_count() > max_petals {
            return Err(Error::TooLarge {
                what: "cycle complex petal count",
                size: g.edge_count(),
                cap: max_petals,
            });
        }
        if !g.is_rose() && m > MAX_DIRECTED_EDGES {
            return Err(Error::TooLarge {
                what: "cycle complex directed edge count",
                size: m,
                cap: MAX_DIRECTED_EDGES,
            });
        }
        let cycles = simple_cycles(g);
        let masks: Vec<u64> = cycles
            .iter()
            .map(|c| c.iter().fold(0u64, |a, &e| a | (1 << e)))
            .collect();
        let mut by_min: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (i, c) in cycles.iter().enumerate() {
            by_min[c[0]].push(i);
        }

        let mut simplices = Vec::new();
        let mut chosen = Vec::new();
        collect(0, 0, &mut chosen, &by_min, &masks, m, &mut simplices)?;

        let n = g.edge_count();
        let mut out = Vec::with_capacity(simplices.len());
        let mut grouped: BTreeMap<Vec<u8>, i64> = BTreeMap::new();
        for s in simplices {
            let mut counts = vec![0u8; n];
            for &ci in &s {
                for &e in &cycles[ci as usize] {
                    counts[MetricGraph::unoriented(e)] += 1;
                }
            }
            let sign = if s.len() % 2 == 0 { 1 } else { -1 };
            *grouped.entry(counts.clone()).or_insert(0) += sign;
            out.push(Simplex { cycles: s, counts });
        }
        let terms = grouped.into_iter().filter(|(_, c)| *c != 0).collect();
        Ok(CycleComplex {
            cycles,
            simplices: out,
            edge_count: n,
            terms,
        })
    }

    fn weighted_terms<'a>(&'a self, l: &'a [f64]) -> impl Iterator<Item = (&'a [u8], f64)> + 'a {
        self.terms.iter().filter_map(move |(counts, c)| {
            let mut len = 0.0;
            for (k, &ct) in counts.iter().enumerate() {
                if ct > 0 {
                    len += ct as f64 * l[k];
                }
            }
            let w = (-len).exp();
            (w > 0.0).then_some((counts.as_slice(), *c as f64 * w))
        })
    }

    fn pair(counts: &[u8], x: &[f64]) -> f64 {
        counts
            .iter()
            .zip(x)
            .filter(|(c, _)| **c > 0)
            .map(|(&c, xi)| c as f64 * xi)
            .sum()
    }

    fn check(&self, l: &LengthFunction) -> Result<()> {
        if l.len() != self.edge_count {
            return crate::error::domain("length function does not match the cycle complex");
        }
        Ok(())
    }

    /// `det(I - A(l))` expanded as `sum over collections (including the empty one) of (-1)^{#cycles} exp(-l(Delta))`.
    pub fn f_value(&self, l: &LengthFunction) -> Result<f64> {
        self.check(l)?;
        Ok(1.0 + self.weighted_terms(l.as_slice()).map(|(_, t)| t).sum::<f64>())
    }

    pub fn gradient(&self, l: &LengthFunction) -> Result<Vec<f64>> {
        self.check(l)?;
        let mut g = vec![0.0; self.edge_count];
        for (counts, t) in self.weighted_terms(l.as_slice()) {
            for (gi, &c) in g.iter_mut().zip(counts) {
                *gi -= c as f64 * t;
            }
        }
        Ok(g)
    }

    /// `<x, grad F(l)>`.
    pub fn grad_pairing(&self, l: &LengthFunction, x: &[f64]) -> Result<f64> {
        self.check(l)?;
        Ok(-self
            .weighted_terms(l.as_slice())
            .map(|(c, t)| Self::pair(c, x) * t)
            .sum::<f64>())
    }

    /// `<v, Hess F(l) v>`.
    pub fn hess_quadform(&self, l: &LengthFunction, v: &[f64]) -> Result<f64> {
        self.check(l)?;
        Ok(self
            .weighted_terms(l.as_slice())
            .map(|(c, t)| {
                let p = Self::pair(c, v);
                p * p * t
            })
            .sum())
    }
}

/// Each simple cycle listed once, rotated to start at its smallest vertex.
fn simple_cycles(g: &MetricGraph) -> Vec<Vec<usize>> {
    let m = g.directed_count();
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; m];
    fn dfs(
        g: &MetricGraph,
        start: usize,
        v: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        for next in start..g.directed_count() {
            if !g.follows(v, next) {
                continue;
            }
            if next == start {
                out.push(path.clone());
            } else if !on_path[next] {
                on_path[next] = true;
                path.push(next);
                dfs(g, start, next, path, on_path, out);
                path.pop();
                on_path[next] = false;
            }
        }
    }
    for s in 0..m {
        path.push(s);
        on_path[s] = true;
        dfs(g, s, s, &mut path, &mut on_path, &mut out);
        path.pop();
        on_path[s] = false;
    }
    out
}

fn collect(
    v: usize,
    mask: u64,
    chosen: &mut Vec<u32>,
    by_min: &[Vec<usize>],
    masks: &[u64],
    m: usize,
    out: &mut Vec<Vec<u32>>,
) -> Result<()> {
    if v == m {
        if !chosen.is_empty() {
            if out.len() >= MAX_SIMPLICES {
                return Err(Error::TooLarge {
                    what: "cycle complex simplex count",
                    size: out.len() + 1,
                    cap: MAX_SIMPLICES,
                });
            }
            out.push(chosen.clone());
        }
        return Ok(());
    }
    collect(v + 1, mask, chosen, by_min, masks, m, out)?;
    if mask & (1 << v) == 0 {
        for &c in &by_min[v] {
            if masks[c] & mask == 0 {
                chosen.push(c as u32);
                collect(v + 1, mask | masks[c], chosen, by_min, masks, m, out)?;
                chosen.pop();
            }
        }
    }
    Ok(())
}

/// `det(I - A(e, e') exp(-l(e)))` over directed edges.
pub fn f_gamma(g: &MetricGraph, l: &LengthFunction) -> Result<f64> {
    l.check_graph(g)?;
    Ok(f_gamma_raw(g, l.as_slice()))
}

fn f_gamma_raw(g: &MetricGraph, l: &[f64]) -> f64 {
    let m = g.directed_count();
    let mat = DMatrix::from_fn(m, m, |e, f| {
        let a = if g.follows(e, f) {
            (-l[MetricGraph::unoriented(e)]).exp()
        } else {
            0.0
        };
        if e == f {
            1.0 - a
        } else {
            -a
        }
    });
    mat.determinant()
}

fn along(l: &[f64], x: &[f64], s: f64) -> Vec<f64> {
    l.iter()
        .zip(x)
        .map(|(&li, &xi)| if li.is_finite() { li + s * xi } else { li })
        .collect()
}

fn direction_scale(l: &[f64], x: &[f64]) -> f64 {
    l.iter()
        .zip(x)
        .filter(|(li, _)| li.is_finite())
        .map(|(_, xi)| xi.abs())
        .fold(0.0, f64::max)
}

/// `<x, grad F(l)>` by fourth-order central differences of the determinant.
pub fn f_gamma_grad_pairing(g: &MetricGraph, l: &LengthFunction, x: &[f64]) -> Result<f64> {
    l.check_graph(g)?;
    let scale = direction_scale(l.as_slice(), x);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let h = 1e-3 / scale;
    let f = |s: f64| f_gamma_raw(g, &along(l.as_slice(), x, s));
    Ok((-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h))
}

/// `<v, Hess F(l) v>` by fourth-order central differences of the determinant.
pub fn f_gamma_hess_quadform(g: &MetricGraph, l: &LengthFunction, v: &[f64]) -> Result<f64> {
    l.check_graph(g)?;
    let scale = direction_scale(l.as_slice(), v);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let h = 2e-3 / scale;
    let f = |s: f64| f_gamma_raw(g, &along(l.as_slice(), v, s));
    Ok((-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cycle_counts_small_rose() {
        let g = MetricGraph::rose(2).unwrap();
        let cc = CycleComplex::build(&g, 4).unwrap();
        // Brute force: simple cycles are cyclic orderings of vertex subsets
        // whose consecutive pairs are allowed transitions.
        let mut brute = 0;
        let m = 4;
        for mask in 1u32..(1 << m) {
            let verts: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let first = verts[0];
            let rest = &verts[1..];
            let mut perm: Vec<usize> = rest.to_vec();
            let mut count_perm = |p: &[usize]| {
                let mut seq = vec![first];
                seq.extend_from_slice(p);
                (0..seq.len()).all(|i| g.follows(seq[i], seq[(i + 1) % seq.len()]))
            };
            // Heap's algorithm over at most 3 elements.
            fn permute(k: usize, a: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool, n: &mut usize) {
                if k <= 1 {
                    if f(a) {
                        *n += 1;
                    }
                    return;
                }
                for i in 0..k {
                    permute(k - 1, a, f, n);
                    let j = if k.is_multiple_of(2) { i } else { 0 };
                    a.swap(j, k - 1);
                }
            }
            let k = perm.len();
            permute(k, &mut perm, &mut count_perm, &mut brute);
        }
        assert_eq!(cc.cycles.len(), brute);
        for s in &cc.simplices {
            assert!(!s.cycles.is_empty());
            assert!(s.counts.iter().all(|&c| c <= 2));
        }
        for (i, c) in cc.cycles.iter().enumerate() {
            let single = cc.simplices.iter().find(|s| s.cycles == vec![i as u32]).unwrap();
            assert_eq!(single.counts.iter().map(|&x| x as usize).sum::<usize>(), c.len());
        }
    }

    #[test]
    fn expansion_matches_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..=3 {
            let g = MetricGraph::rose(n).unwrap();
            let cc = CycleComplex::build(&g, 4).unwrap();
            for _ in 0..5 {
                let l = LengthFunction::new((0..n).map(|_| rng.gen_range(0.1..3.0)).collect()).unwrap();
                let a = cc.f_value(&l).unwrap();
                let b = f_gamma(&g, &l).unwrap();
                assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let g = MetricGraph::rose(3).unwrap();
        let cc = CycleComplex::build(&g, 4).unwrap();
        let l = LengthFunction::new(vec![0.8, 1.1, 1.7]).unwrap();
        let v = [0.3, -0.5, 0.2];
        let gp = cc.grad_pairing(&l, &v).unwrap();
        let hq = cc.hess_quadform(&l, &v).unwrap();
        assert!((gp - f_gamma_grad_pairing(&g, &l, &v).unwrap()).abs() < 1e-9);
        assert!((hq - f_gamma_hess_quadform(&g, &l, &v).unwrap()).abs() < 1e-7);
        let grad = cc.gradient(&l).unwrap();
        let dot: f64 = grad.iter().zip(&v).map(|(a, b)| a * b).sum();
        assert!((dot - gp).abs() < 1e-13);
    }

    #[test]
    fn size_caps() {
        let g = MetricGraph::rose(5).unwrap();
        assert!(matches!(CycleComplex::build(&g, 4), Err(Error::TooLarge { .. })));
    }
}
