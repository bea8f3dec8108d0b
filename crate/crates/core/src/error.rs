use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interval endpoint {0} lies outside [0, 1]")]
    OutOfRange(Rational),

    #[error("interval [{lo}, {hi}] has lo > hi")]
    Reversed { lo: Box<Rational>, hi: Box<Rational> },

    #[error("long-knife queries need an even number of layers, got {0}")]
    OddLayerCount(usize),

    #[error("no point reaches the requested value {0}")]
    NoSuchPoint(Rational),

    #[error("layers {0} and {1} overlap and cannot be merged")]
    LayerOverlap(usize, usize),

    #[error("no two agents share an identical valuation")]
    NoIdenticalPair,

    #[error("protocol output failed exact verification: {0}")]
    VerificationFailed(String),

    /// A protocol was called outside its domain. `protocol` names the procedure
    /// whose hypothesis failed.
    #[error("{protocol}: {detail}")]
    Precondition { protocol: &'static str, detail: String },

    #[error("unknown agent {0}")]
    UnknownAgent(usize),

    #[error("unknown layer {0}")]
    UnknownLayer(usize),

    #[error("invalid valuation: {0}")]
    InvalidValuation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn precondition(protocol: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            protocol,
            detail: detail.into(),
        }
    }
}
