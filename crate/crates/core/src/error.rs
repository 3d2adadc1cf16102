use thiserror::Error;

/// A single row of a network that fails validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowViolation {
    /// `sum_j |w_ij| >= 1` for row `i`.
    Substochasticity(usize),
    /// `|w_ii0| + sum_j |w_ij| + |w_ig| + |w_ib| > 1` for row `i`.
    WeightBudget(usize),
}

impl std::fmt::Display for RowViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowViolation::Substochasticity(i) => write!(f, "SubstochasticityViolation({i})"),
            RowViolation::WeightBudget(i) => write!(f, "WeightBudgetViolation({i})"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("invalid network: {}", join_violations(.0))]
    Invalid(Vec<RowViolation>),
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("node index {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("bias of node {0} outside [-1, 1]")]
    BiasOutOfRange(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop on line {0}")]
    SelfLoop(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

fn join_violations(v: &[RowViolation]) -> String {
    v.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("linear solve failed: residual {residual:e} exceeds tolerance {tolerance:e}")]
    SolveFailure { residual: f64, tolerance: f64 },
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum StrategyError {
    #[error("concavity exponent t = {0} is outside the supported domain t > 1")]
    ConcavityDomain(f64),
    #[error("bad camp cannot drive the opinion sum to zero (shortfall {shortfall})")]
    AdversaryInfeasible { shortfall: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("numerical breakdown after {pivots} pivots (condition estimate {condition:e})")]
    NumericalBreakdown { pivots: usize, condition: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum RobustError {
    #[error("uncertainty polytope is empty")]
    EmptyPolytope,
    #[error("no boundary candidate is feasible")]
    NoFeasibleBoundary,
    #[error("robust LP is infeasible")]
    LpInfeasible,
    #[error("robust LP is unbounded (block {block})")]
    LpUnbounded { block: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("grid has {points} points, above the limit of {limit}")]
    GridTooLarge { points: u128, limit: u128 },
    #[error("instance too large for exhaustive enumeration: {0}")]
    InstanceTooLarge(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Umbrella error for callers that drive several subsystems.
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Robust(#[from] RobustError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl Error {
    /// Stable machine-readable code, used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Network(NetworkError::Invalid(_)) => "InvalidNetwork",
            Error::Network(_) => "NetworkInput",
            Error::Solve(_) => "SolveFailure",
            Error::Strategy(StrategyError::ConcavityDomain(_)) => "ConcavityDomain",
            Error::Strategy(StrategyError::AdversaryInfeasible { .. }) => "AdversaryInfeasible",
            Error::Strategy(StrategyError::InvalidInput(_)) => "InvalidInput",
            Error::Strategy(StrategyError::Solve(_)) => "SolveFailure",
            Error::Lp(_) => "NumericalBreakdown",
            Error::Robust(RobustError::LpInfeasible) => "LpInfeasible",
            Error::Robust(RobustError::LpUnbounded { .. }) => "LpUnbounded",
            Error::Robust(_) => "RobustFailure",
            Error::Oracle(_) => "OracleFailure",
        }
    }
}
