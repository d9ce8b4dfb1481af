use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ground set must contain at least one element")]
    EmptyGroundSet,

    #[error("image vector is not a bijection of 1..={n}")]
    NotABijection { n: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("element {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("a transposition needs two distinct elements, got ({0} {0})")]
    DegenerateTransposition(usize),

    #[error("cannot parse cycle notation: {0}")]
    Parse(String),

    #[error("parameter {name} = {value} outside {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("series did not converge within {max_terms} terms")]
    SeriesTruncation { max_terms: usize },

    #[error("quadrature failed to reach tolerance {tol} on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64, tol: f64 },

    #[error("root finding for {what} did not converge")]
    NoConvergence { what: &'static str },

    #[error("radius {k} is not below n = {n}")]
    RadiusTooLarge { k: usize, n: usize },

    #[error("{what} limited to n <= {max}, got {n}")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("cycle structures disagree on {what}: {left} vs {right}")]
    IncompatibleCycleTypes {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("{what} exceeded its cap of {cap} attempts")]
    RetryCap { what: &'static str, cap: u64 },

    #[error("walk did not hit radius {target} within {cap} steps")]
    StepCap { target: usize, cap: u64 },

    #[error("constructed path is not a geodesic at step {step}: {detail}")]
    NotGeodesic { step: usize, detail: String },

    #[error("empirical distribution is empty")]
    EmptyDistribution,

    #[error("output error: {0}")]
    Output(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Output(e.to_string())
    }
}
