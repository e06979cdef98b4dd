use thiserror::Error;

use crate::game::Side;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid bit word {0:?}: only '0' and '1' are allowed")]
    InvalidWord(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("theta parameter {m} does not fit in {len} bits")]
    ThetaOutOfRange { m: u64, len: usize },

    #[error("index {index} exceeds the declared horizon {horizon} of a generated stream")]
    HorizonExceeded { index: usize, horizon: usize },

    #[error("{op} needs closed-form (constant or periodic) streams; use prefix probes instead")]
    NotClosedForm { op: &'static str },

    #[error("periodic stream needs a nonempty period")]
    EmptyPeriod,

    #[error("code needs at least {needed} members, found {found}")]
    TooFewMembers { needed: usize, found: usize },

    #[error("word {0} is not a member of the code")]
    NotAMember(String),

    #[error("code is not {k}-thin: {left} and {right} are too close")]
    NotKThin { k: u64, left: String, right: String },

    #[error("stream is not ~-related to the anchor of its class")]
    NotRelated,

    #[error("the two sets do not cover Z_2^{n}: {missing} is in neither")]
    CoverViolated { n: usize, missing: String },

    #[error("{side:?} strategy {name:?} returned an empty move after history {history:?}")]
    EmptyMove {
        side: Side,
        name: String,
        history: Vec<String>,
    },

    #[error("target oracle {name:?} is not monotone: verdict {earlier} at length {at} changed to {later} at length {then}")]
    NonMonotoneOracle {
        name: String,
        at: usize,
        earlier: String,
        then: usize,
        later: String,
    },

    #[error("capture schedule invariant violated: {0}")]
    CaptureInvariant(String),

    #[error("requested n = {n} exceeds the configured budget n <= {max_n} for k = {k}")]
    BudgetExceeded { n: usize, k: usize, max_n: usize },

    #[error("partition certificate failed verification: {0}")]
    Certificate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
