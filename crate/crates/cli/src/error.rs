use foothills_core::Error as CoreError;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// At least one validation entry failed, or two routes disagreed.
pub const EXIT_VALIDATION: i32 = 1;
/// Bad flags or out-of-domain arguments.
pub const EXIT_USAGE: i32 = 2;
/// Cell budget, order guard, zoom cap or quadrature limit exceeded.
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Io(_) | CliError::Json(_) => EXIT_VALIDATION,
            CliError::Core(e) => match e {
                CoreError::LambdaOutOfRange(_)
                | CoreError::PointOutOfRange(_)
                | CoreError::InvalidDigit(_)
                | CoreError::EmptyExpansion
                | CoreError::ShiftAtDepthZero
                | CoreError::OddOrder(_)
                | CoreError::NotOnUnitCircle { .. }
                | CoreError::UnsupportedKernel(_)
                | CoreError::InvalidArgument(_) => EXIT_USAGE,
                CoreError::CellBudgetExceeded { .. }
                | CoreError::OrderTooLarge { .. }
                | CoreError::QuadratureNotConverged(_) => EXIT_RESOURCE,
                CoreError::ContinuedFractionPole(_) | CoreError::RouteDisagreement { .. } => {
                    EXIT_VALIDATION
                }
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
