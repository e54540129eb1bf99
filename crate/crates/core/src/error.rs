use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("population of {size} is too small, at least {min} members are required")]
    PopulationTooSmall { size: usize, min: usize },

    #[error("member {index} has not been evaluated")]
    Unevaluated { index: usize },

    #[error("population is empty")]
    EmptyPopulation,

    #[error("requested {requested} members from a population of {available}")]
    SelectionTooLarge { requested: usize, available: usize },

    #[error("invalid bounds in dimension {dim}: lower {lower} > upper {upper}")]
    InvalidBounds { dim: usize, lower: f64, upper: f64 },

    #[error("value {value} lies outside [{lower}, {upper}]")]
    OutOfRange { value: f64, lower: f64, upper: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite network output")]
    NonFinite,

    #[error("empty sample set")]
    EmptySamples,

    #[error("data error: {0}")]
    Data(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
