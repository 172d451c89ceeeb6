use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lambda must satisfy |lambda| < 1 and be finite, got {0}")]
    LambdaOutOfRange(f64),
    #[error("point {0} lies outside [-1, 1]")]
    PointOutOfRange(f64),
    #[error("digit {0} is not -1 or +1")]
    InvalidDigit(i64),
    #[error("an expansion needs at least one digit")]
    EmptyExpansion,
    #[error("cannot shift an expansion of depth 0")]
    ShiftAtDepthZero,
    #[error("depth {depth} needs 2^{} cells, budget is 2^{budget_log2}", depth + 1)]
    CellBudgetExceeded { depth: usize, budget_log2: u32 },
    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("order {0} is odd; odd moments vanish and are not computed here")]
    OddOrder(usize),
    #[error("continued fraction undefined at omega = {0}")]
    ContinuedFractionPole(f64),
    #[error("periodic quadrature did not converge within {0} nodes")]
    QuadratureNotConverged(usize),
    #[error("unsupported kernel: {0}")]
    UnsupportedKernel(&'static str),
    #[error("z = {re} + {im}i is not on the unit circle")]
    NotOnUnitCircle { re: f64, im: f64 },
    #[error("{what}: routes disagree ({lhs} vs {rhs})")]
    RouteDisagreement { what: &'static str, lhs: f64, rhs: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
