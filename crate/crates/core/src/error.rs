use thiserror::Error;

/// Errors raised by the model, planner, simulator and parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A numeric input lies outside the mathematical domain of an operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A structural precondition on the arguments does not hold.
    #[error("invalid argument to {op}: {detail}")]
    Argument { op: &'static str, detail: String },

    /// The operation is not valid for the current state of its input.
    #[error("state error in {op}: {detail}")]
    State { op: &'static str, detail: String },

    /// A configuration value violates an invariant. `path` names the field.
    #[error("config error at `{path}`: {detail}")]
    Config { path: String, detail: String },

    /// A text input could not be parsed. `line` is 1-based, 0 when not applicable.
    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}

pub(crate) fn argument(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Argument {
        op,
        detail: detail.into(),
    }
}

pub(crate) fn require_nonneg(op: &'static str, name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(domain(
            op,
            format!("{name} must be finite and >= 0, got {x}"),
        ))
    }
}
