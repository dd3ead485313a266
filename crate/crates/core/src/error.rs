use thiserror::Error;

/// Failures raised by the geometric and periodicity routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument lies outside the domain of the operation.
    #[error("parameter `{name}` = {value} violates {constraint}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// A precondition on composite inputs does not hold.
    #[error("contract violation: {0}")]
    Contract(String),
    /// The contact angle is 0 or π, so the curve collapses onto a fiber.
    #[error("degenerate contact angle: cos(theta) = {cos_theta}")]
    DegenerateAngle { cos_theta: f64 },
    /// The configuration makes a formula singular (e.g. a vanishing radicand).
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("frame index {0} out of range 1..=3")]
    FrameIndex(usize),
    /// A sample sits too close to the pole of the stereographic chart.
    #[error("stereographic projection singular at sample(s) {indices:?}")]
    ProjectionSingularity { indices: Vec<usize> },
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("empty sample list")]
    Empty,
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(
        name: &'static str,
        value: impl Into<f64>,
        constraint: &'static str,
    ) -> Self {
        Error::ParameterDomain {
            name,
            value: value.into(),
            constraint,
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
