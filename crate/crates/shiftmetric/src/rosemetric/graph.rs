use crate::error::{domain, Result};

/// Finite connected graph with every vertex of valence at least 3.
///
/// Directed edge `2i` is the i-th positively oriented edge and `2i + 1` its
/// reverse, so `reverse(e) = e ^ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: usize,
    origin: Vec<usize>,
    terminus: Vec<usize>,
}

impl MetricGraph {
    /// Build from the positively oriented edges `(origin, terminus)`.
    pub fn new(vertices: usize, positive: &[(usize, usize)]) -> Result<Self> {
        if vertices == 0 {
            return domain("graph needs a vertex");
        }
        let mut origin = Vec::with_capacity(2 * positive.len());
        let mut terminus = Vec::with_capacity(2 * positive.len());
        for &(o, t) in positive {
            if o >= vertices || t >= vertices {
                return domain(format!("edge ({o}, {t}) uses a missing vertex"));
            }
            origin.extend([o, t]);
            terminus.extend([t, o]);
        }
        let g = MetricGraph {
            vertices,
            origin,
            terminus,
        };
        for v in 0..vertices {
            let valence = g.origin.iter().filter(|&&o| o == v).count();
            if valence < 3 {
                return domain(format!("vertex {v} has valence {valence} < 3"));
            }
        }
        if vertices as i64 - positive.len() as i64 >= 0 {
            return domain("Euler characteristic must be negative");
        }
        // Connectivity by flood fill.
        let mut seen = vec![false; vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in 0..g.origin.len() {
                if g.origin[e] == v && !seen[g.terminus[e]] {
                    seen[g.terminus[e]] = true;
                    stack.push(g.terminus[e]);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return domain("graph is not connected");
        }
        Ok(g)
    }

    /// One vertex with `n >= 2` loops.
    pub fn rose(n: usize) -> Result<Self> {
        if n < 2 {
            return domain(format!("a rose needs at least 2 petals, got {n}"));
        }
        Self::new(1, &vec![(0, 0); n])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Number of unoriented edges.
    pub fn edge_count(&self) -> usize {
        self.origin.len() / 2
    }

    /// Number of directed edges.
    pub fn directed_count(&self) -> usize {
        self.origin.len()
    }

    pub fn is_rose(&self) -> bool {
        self.vertices == 1
    }

    pub fn origin(&self, e: usize) -> usize {
        self.origin[e]
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.terminus[e]
    }

    pub fn reverse(e: usize) -> usize {
        e ^ 1
    }

    /// Index of the unoriented edge underlying `e`.
    pub fn unoriented(e: usize) -> usize {
        e / 2
    }

    /// Reduced transition: `e'` may follow `e` when `t(e) = o(e')` and `e' != reverse(e)`.
    pub fn follows(&self, e: usize, next: usize) -> bool {
        self.terminus[e] == self.origin[next] && next != Self::reverse(e)
    }

    /// 0/1 transition matrix on directed edges, row-major.
    pub fn transition_matrix(&self) -> Vec<Vec<u8>> {
        let m = self.directed_count();
        (0..m)
            .map(|e| (0..m).map(|f| self.follows(e, f) as u8).collect())
            .collect()
    }
}
