use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge sample {sample} deviates from declared limit {limit} (side: {side})")]
    EdgeMismatch {
        side: &'static str,
        sample: f64,
        limit: f64,
    },
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("function does not decay at the {0} end")]
    NonDecaying(&'static str),
    #[error("both factors have nonzero limits on the {0} side")]
    DivergentTail(&'static str),
    #[error("not in domain: {0}")]
    NotInDomain(String),
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("regularizing element has a vanishing charge (T_c = {tc}, T_q = {tq})")]
    DegenerateRegularizer { tc: String, tq: String },
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("intervals are not disjoint")]
    BadIntervals,
    #[error("character table has no value for charge {0}")]
    MissingCharacterValue(String),
    #[error("localization of the regularizer is not contained in the interval")]
    RegularizerNotContained,
    #[error("declared charge {declared} disagrees with quadrature {measured} for {id}")]
    ChargeMismatch {
        id: String,
        declared: String,
        measured: f64,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
