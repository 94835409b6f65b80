use super::MetricGraph;
use crate::error::{domain, Result};

/// Positive lengths on the unoriented edges. In extended mode some entries
/// may be `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthFunction {
    lengths: Vec<f64>,
    extended: bool,
}

impl LengthFunction {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        if lengths.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return domain(format!("lengths must be finite and positive: {lengths:?}"));
        }
        Ok(LengthFunction {
            lengths,
            extended: false,
        })
    }

    pub fn extended(lengths: Vec<f64>) -> Result<Self> {
        if lengths
            .iter()
            .any(|l| l.is_nan() || *l <= 0.0 || *l == f64::NEG_INFINITY)
        {
            return domain(format!("lengths must be positive or +inf: {lengths:?}"));
        }
        Ok(LengthFunction {
            lengths,
            extended: true,
        })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    /// Length of a directed edge.
    pub fn directed(&self, e: usize) -> f64 {
        self.lengths[MetricGraph::unoriented(e)]
    }

    pub fn finite_count(&self) -> usize {
        self.lengths.iter().filter(|l| l.is_finite()).count()
    }

    pub fn scaled(&self, a: f64) -> Self {
        LengthFunction {
            lengths: self.lengths.iter().map(|l| a * l).collect(),
            extended: self.extended,
        }
    }

    pub(crate) fn check_graph(&self, g: &MetricGraph) -> Result<()> {
        if self.lengths.len() != g.edge_count() {
            return domain(format!(
                "length function has {} entries, graph has {} edges",
                self.lengths.len(),
                g.edge_count()
            ));
        }
        Ok(())
    }
}

/// Copy `lengths` onto the petals listed in `support` of a rose with `n`
/// petals and put `+inf` everywhere else.
pub fn embed_extended(lengths: &LengthFunction, support: &[usize], n: usize) -> Result<LengthFunction> {
    if support.len() != lengths.len() {
        return domain("support size must match the number of lengths");
    }
    let mut out = vec![f64::INFINITY; n];
    let mut seen = vec![false; n];
    for (&i, &l) in support.iter().zip(lengths.as_slice()) {
        if i >= n || seen[i] {
            return domain(format!("bad support index {i}"));
        }
        seen[i] = true;
        out[i] = l;
    }
    LengthFunction::extended(out)
}
