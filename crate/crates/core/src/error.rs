use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("horizon needs {needed} coefficients but the sequence only has {available}")]
    HorizonExceedsData { needed: u64, available: u64 },

    #[error("evaluation needs {required} terms, above the cap of {cap}")]
    TermCap { required: u64, cap: u64 },

    #[error("sequence is not finite-valued: {0}")]
    NotFiniteValued(String),

    #[error("decay hypothesis violated at indices {indices:?}")]
    DecayViolated { indices: Vec<i64> },

    #[error("malformed csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub(crate) fn precondition(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}
