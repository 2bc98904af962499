use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("row {row}: {message}")]
    MalformedRow { row: usize, message: String },

    #[error("quote {quote_id}: {message}")]
    QuoteInvariant { quote_id: String, message: String },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("pricing failed for quote {quote_id}: {source}")]
    Pricing {
        quote_id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::MalformedRow { .. }
            | Error::QuoteInvariant { .. }
            | Error::EmptyDataset
            | Error::Io { .. }
            | Error::Json(_) => 2,
            Error::NonFinite(_) | Error::NonConvergence(_) | Error::Pricing { .. } => 3,
            Error::Calibration(_) => 4,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(format!("{name} = {x}")))
    }
}
