use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function (non-positive
    /// volume, temperature, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The far-field states do not form a rarefaction-contact-rarefaction
    /// pattern.
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    /// An iterative method failed, or a non-finite value appeared.
    #[error("numeric error: {message}")]
    Numeric {
        message: String,
        residual: Option<f64>,
    },

    /// Specific volume or temperature became non-positive.
    #[error("positivity lost at node {node} (t = {t}): {field} = {value}")]
    Positivity {
        node: usize,
        t: f64,
        field: &'static str,
        value: f64,
    },

    /// The composite ansatz is not positive for the requested strengths.
    #[error("wave strength too large: {0}")]
    StrengthTooLarge(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, residual: Option<f64>) -> Self {
        Error::Numeric {
            message: msg.into(),
            residual,
        }
    }
}
