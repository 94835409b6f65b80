use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root solver did not converge (residuals {residuals:?})")]
    SolverFailure { residuals: Vec<f64> },

    #[error("entropy undefined: only {finite_petals} petal(s) of finite length")]
    DegenerateEntropy { finite_petals: usize },

    #[error("{what} too large: {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("quadrature did not reach tolerance (coarse {coarse}, fine {fine})")]
    Accuracy { coarse: f64, fine: f64 },

    #[error("degenerate base point: a critical height is zero")]
    DegenerateBasepoint,

    #[error("index set classification inconclusive; ratio table {table:?}")]
    ClassificationUncertain { table: Vec<Vec<f64>> },

    #[error("circuit enumeration exceeded {cap} states")]
    CountGuard { cap: usize },

    #[error("entropy methods disagree: {values:?}")]
    MethodDisagreement { values: Vec<(String, f64)> },

    #[error("vector is not tangent to the unit entropy locus (pairing {pairing:e})")]
    NotTangent { pairing: f64 },

    #[error("length function is not at unit entropy (entropy {entropy})")]
    NotUnitEntropy { entropy: f64 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
