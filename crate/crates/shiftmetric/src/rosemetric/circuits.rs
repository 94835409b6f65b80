use std::collections::HashMap;

use super::{LengthFunction, MetricGraph};
use crate::error::{domain, Error, Result};

/// Cap on dynamic-programming states.
pub const CIRCUIT_STATE_CAP: usize = 10_000_000;

/// Number of rooted circuits of length at most `t`.
///
/// A rooted circuit is a reduced edge path `e_1 ... e_k` with
/// `t(e_k) = o(e_1)` and `e_k != reverse(e_1)`. Paths are grouped by first
/// edge, last edge and per-edge usage counts, which fixes their length, so
/// the count is exact without listing the paths one by one.
pub fn circuit_count(g: &MetricGraph, l: &LengthFunction, t: f64) -> Result<u128> {
    l.check_graph(g)?;
    if !(t >= 0.0) {
        return domain("length bound must be nonnegative");
    }
    let m = g.directed_count();
    let n = g.edge_count();
    let bound = t * (1.0 + 1e-12);
    let lengths = l.as_slice();
    let len_of = |counts: &[u16]| -> f64 {
        counts
            .iter()
            .zip(lengths)
            .filter(|(c, _)| **c > 0)
            .map(|(&c, x)| c as f64 * x)
            .sum()
    };

    type Key = (u8, u8, Vec<u16>);
    let mut layer: HashMap<Key, u128> = HashMap::new();
    for e in 0..m {
        if l.directed(e) <= bound {
            let mut c = vec![0u16; n];
            c[MetricGraph::unoriented(e)] = 1;
            layer.insert((e as u8, e as u8, c), 1);
        }
    }
    let mut total: u128 = 0;
    let mut states = 0usize;
    while !layer.is_empty() {
        states += layer.len();
        if states > CIRCUIT_STATE_CAP {
            return Err(Error::CountGuard { cap: CIRCUIT_STATE_CAP });
        }
        let mut next: HashMap<Key, u128> = HashMap::new();
        for ((first, last, counts), ways) in layer {
            let (first, last) = (first as usize, last as usize);
            if g.follows(last, first) {
                total = total
                    .checked_add(ways)
                    .ok_or_else(|| Error::Domain("circuit count overflow".into()))?;
            }
            let base = len_of(&counts);
            for e in 0..m {
                if !g.follows(last, e) || base + l.directed(e) > bound {
                    continue;
                }
                let mut c = counts.clone();
                c[MetricGraph::unoriented(e)] += 1;
                let slot = next.entry((first as u8, e as u8, c)).or_insert(0);
                *slot = slot
                    .checked_add(ways)
                    .ok_or_else(|| Error::Domain("circuit count overflow".into()))?;
            }
        }
        layer = next;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Depth-first listing of every rooted circuit.
    fn brute(g: &MetricGraph, l: &LengthFunction, t: f64) -> u128 {
        fn go(g: &MetricGraph, l: &LengthFunction, t: f64, first: usize, last: usize, len: f64, n: &mut u128) {
            if g.follows(last, first) {
                *n += 1;
            }
            for e in 0..g.directed_count() {
                if g.follows(last, e) && len + l.directed(e) <= t * (1.0 + 1e-12) {
                    go(g, l, t, first, e, len + l.directed(e), n);
                }
            }
        }
        let mut n = 0;
        for e in 0..g.directed_count() {
            if l.directed(e) <= t {
                go(g, l, t, e, e, l.directed(e), &mut n);
            }
        }
        n
    }

    #[test]
    fn single_loops() {
        let g = MetricGraph::rose(2).unwrap();
        let l = LengthFunction::constant(2, 1.0).unwrap();
        assert_eq!(circuit_count(&g, &l, 1.0).unwrap(), 4);
        assert_eq!(circuit_count(&g, &l, 0.5).unwrap(), 0);
    }

    #[test]
    fn matches_enumeration() {
        let g = MetricGraph::rose(3).unwrap();
        let l = LengthFunction::new(vec![0.7, 1.0, 1.9]).unwrap();
        for t in [1.0, 2.5, 4.0, 5.3] {
            assert_eq!(circuit_count(&g, &l, t).unwrap(), brute(&g, &l, t), "t={t}");
        }
        let theta = MetricGraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let l = LengthFunction::new(vec![0.5, 0.8, 1.1]).unwrap();
        assert_eq!(circuit_count(&theta, &l, 6.0).unwrap(), brute(&theta, &l, 6.0));
    }

    #[test]
    fn infinite_petals_never_used() {
        let g = MetricGraph::rose(3).unwrap();
        let l = LengthFunction::extended(vec![1.0, f64::INFINITY, 1.0]).unwrap();
        let g2 = MetricGraph::rose(2).unwrap();
        let l2 = LengthFunction::constant(2, 1.0).unwrap();
        assert_eq!(
            circuit_count(&g, &l, 6.0).unwrap(),
            circuit_count(&g2, &l2, 6.0).unwrap()
        );
    }
}
