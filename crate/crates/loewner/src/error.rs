//! Error type shared by the whole crate, with the CLI exit-code mapping.

use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error{}: {source}", fmt_path(.path))]
    Io {
        path: Option<PathBuf>,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {record}: {msg}")]
    Parse { record: String, msg: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Shape {
        context: String,
        expected: String,
        actual: String,
    },

    #[error("duplicate sample point {point} (records {first} and {second})")]
    DuplicatePoint {
        point: Complex64,
        first: usize,
        second: usize,
    },

    #[error(
        "left point {left_index} coincides with right point {right_index} ({point}); \
         divided differences are undefined at shared points"
    )]
    PointCollision {
        left_index: usize,
        right_index: usize,
        point: Complex64,
    },

    #[error("singular pencil: no probe gave a nonzero determinant; use reduce() for rank-deficient data")]
    SingularPencil,

    #[error("evaluation hit a (near-)singular pencil at s = {at}")]
    EvalSingular { at: Complex64 },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("direction matrices are rank deficient; polynomial-coefficient estimation is ill posed")]
    IllPosedDirections,

    #[error("weights sum to zero: the model grows faster than linearly at infinity")]
    ImproperModel,

    #[error("{0}")]
    Domain(String),

    #[error("singular value decomposition did not converge")]
    SvdFailure,
}

fn fmt_path(path: &Option<PathBuf>) -> String {
    match path {
        Some(p) => format!(" ({})", p.display()),
        None => String::new(),
    }
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: Some(path.into()),
            source,
        }
    }

    pub fn shape(context: &str, expected: impl ToString, actual: impl ToString) -> Self {
        Error::Shape {
            context: context.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    /// Process exit code for the CLI: 1 for input/output problems,
    /// 2 for numerical failures, 3 for configuration mistakes.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Parse { .. } | Error::Json(_) => 1,
            Error::Config(_) | Error::Shape { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(source: std::io::Error) -> Self {
        Error::Io { path: None, source }
    }
}
