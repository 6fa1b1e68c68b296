use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// A coefficient needed by a computation lies below the known window.
    ///
    /// `required_floor` is the minimal precision floor that makes the
    /// computation well defined; `available` is the floor actually present.
    #[error("precision error in {context}: need coefficients down to t^{required_floor}, window floor is t^{available}")]
    Precision {
        context: String,
        required_floor: i64,
        available: i64,
    },

    #[error("empty window: {0}")]
    EmptyWindow(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid gamma: {0}")]
    InvalidGamma(String),

    #[error("out of range: {0}")]
    OutOfRange(String),
}

impl Error {
    pub(crate) fn precision(context: impl Into<String>, required_floor: i64, available: i64) -> Self {
        Error::Precision {
            context: context.into(),
            required_floor,
            available,
        }
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
