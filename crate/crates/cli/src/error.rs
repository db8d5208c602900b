use std::path::Path;

use idealpoly_core::geom::GeomError;
use idealpoly_core::optvol::OptError;
use idealpoly_core::rivin::RivinError;
use idealpoly_core::stats::StatsError;
use serde::Serialize;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message}")]
    Usage { message: String },
    #[error("input file {path} not found")]
    InputNotFound { path: String },
    #[error("cannot read {path}: {message}")]
    InputRead { path: String, message: String },
    #[error("cannot parse {path}: {message}")]
    InputParse { path: String, message: String },
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("triangulation is not realizable as a convex ideal polyhedron")]
    NotRealizable,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write {path}: {message}")]
    OutputWrite { path: String, message: String },
    #[error("{failed} selftest item(s) failed")]
    SelftestFailed { failed: usize },
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    code: &'a str,
    message: String,
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::Usage { .. } => "USAGE",
            Self::InputNotFound { .. } => "INPUT_NOT_FOUND",
            Self::InputRead { .. } => "INPUT_READ",
            Self::InputParse { .. } => "INPUT_PARSE",
            Self::InvalidTriangulation(_) => "INVALID_TRIANGULATION",
            Self::InvalidArgument(_) => "INVALID_ARGUMENT",
            Self::NotRealizable => "NOT_REALIZABLE",
            Self::Numerical(_) => "NUMERICAL_FAILURE",
            Self::OutputWrite { .. } => "OUTPUT_WRITE",
            Self::SelftestFailed { .. } => "SELFTEST_FAILED",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::NotRealizable => EXIT_NEGATIVE,
            Self::Numerical(_) | Self::SelftestFailed { .. } => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }

    /// Single-line JSON rendering for the error stream.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&ErrorLine { code: self.code(), message: self.to_string() }).expect("error line serializes")
    }

    pub fn parse(path: &Path, message: impl ToString) -> Self {
        Self::InputParse { path: path.display().to_string(), message: message.to_string() }
    }

    pub fn write(path: &Path, err: std::io::Error) -> Self {
        Self::OutputWrite { path: path.display().to_string(), message: err.to_string() }
    }
}

impl From<RivinError> for CliError {
    fn from(e: RivinError) -> Self {
        match e {
            RivinError::Triangulation(t) => Self::InvalidTriangulation(t.to_string()),
            RivinError::BadEpsilon(_) => Self::InvalidArgument(e.to_string()),
            RivinError::NumericalFailure(_) => Self::Numerical(e.to_string()),
        }
    }
}

impl From<OptError> for CliError {
    fn from(e: OptError) -> Self {
        match e {
            OptError::NotRealizable => Self::NotRealizable,
            OptError::Rivin(r) => r.into(),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::InvalidConfiguration(_) => Self::InvalidArgument(e.to_string()),
            GeomError::Triangulation(t) => Self::InvalidTriangulation(t.to_string()),
            GeomError::Angles(a) => a.into(),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::Geom(g) => g.into(),
            StatsError::Opt(o) => o.into(),
            other => Self::InvalidArgument(other.to_string()),
        }
    }
}
