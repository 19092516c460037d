use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid fusion: {0}")]
    InvalidFusion(String),
    #[error("invalid turnover: {0}")]
    InvalidTurnover(String),
    #[error("numerical consistency lost: {0}")]
    NumericalConsistency(String),
    #[error("not a matchgate: {0}")]
    NotAMatchgate(String),
    #[error("invalid pass: {0}")]
    InvalidPass(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid site: {0}")]
    InvalidSite(String),
    #[error("invalid layer: {0}")]
    InvalidLayer(String),
    #[error("invalid merge: {0}")]
    InvalidMerge(String),
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error("wrong model: {0}")]
    WrongModel(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("export failed: {0}")]
    Export(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
