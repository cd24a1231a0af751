use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("palette mismatch: {0}")]
    PaletteMismatch(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("element {0} is not in the domain")]
    UnknownElement(u32),

    #[error("tuple for `{symbol}` has {got} entries, arity is {arity}")]
    Arity {
        symbol: String,
        arity: usize,
        got: usize,
    },

    #[error("structure is not connected")]
    Disconnected,

    #[error("{0}")]
    Invalid(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    /// A size guard refused to start a computation. `forecast` is the size
    /// the computation would have needed, when it can be predicted.
    #[error("{what}: cap {cap} exceeded{}", forecast.map(|f| format!(" (forecast {f})")).unwrap_or_default())]
    CapExceeded {
        what: String,
        cap: u64,
        forecast: Option<u64>,
    },

    /// A search ran out of its node budget before reaching an answer.
    #[error("{what}: search budget of {budget} nodes exhausted")]
    Budget { what: String, budget: u64 },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn cap(what: impl Into<String>, cap: u64, forecast: Option<u64>) -> Self {
        Error::CapExceeded {
            what: what.into(),
            cap,
            forecast,
        }
    }

    pub fn schema(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            msg: msg.into(),
        }
    }

    /// True for errors caused by a size cap or search budget rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::Budget { .. })
    }
}
