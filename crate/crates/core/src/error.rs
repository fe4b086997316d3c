use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("malformed representation config: {0}")]
    MalformedConfig(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponent {exponent} exceeds the overflow bound")]
    Overflow { exponent: f64 },
    #[error("the zero vector is not a point of projective space")]
    ZeroVectorInProjectiveMode,
    #[error("operation needs {0}")]
    Unsupported(&'static str),
    #[error("invalid options: {0}")]
    InvalidOptions(&'static str),
    #[error("Yang-Mills functional increased at t = {t}: {before} -> {after}")]
    NonMonotone { t: f64, before: f64, after: f64 },
    #[error("momentum residual {phi_residual} lies in the indeterminate band")]
    Indeterminate { phi_residual: f64 },
    #[error("iteration budget of {0} exhausted")]
    MaxIterations(usize),
    #[error("one-parameter subgroup search was inconclusive (best score {best_score})")]
    InconclusiveGrid { best_score: f64 },
    #[error("point does not have a closed complexified orbit")]
    NotClosedOrbit,
    #[error("enumeration of {needed} monomials exceeds the budget {budget}")]
    CombinatorialBudgetExceeded { needed: u128, budget: u128 },
    #[error("polytope dimension {dim} exceeds the cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("Ehrhart fit residual is nonzero: {0}")]
    FitResidualNonzero(String),
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("lattice point count overflowed")]
    CountOverflow,
}
