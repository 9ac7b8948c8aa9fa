use thiserror::Error;

/// Error taxonomy shared by every fallible operation in the crate.
///
/// Contract violations (calling a solver with a spec outside its stated
/// domain) are programming errors and panic instead of returning `Err`.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed graph text; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally invalid input (out-of-range vertex, bad coloring length,
    /// inconsistent family, ...).
    #[error("input error: {0}")]
    Input(String),

    /// Estimated or measured work exceeds the configured cap.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
