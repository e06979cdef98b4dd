//! Strategy capture: running one opponent strategy in several entangled
//! plays at once.
//!
//! * [`capture_ego`] plays an Ego strategy twice, copying moves between the
//!   plays so the two outcomes differ in exactly one bit. A thin target set
//!   can contain at most one of them.
//! * [`capture_alter`] spreads an Alter strategy's replies over infinitely
//!   many plays on a diagonal schedule so that play `i` produces
//!   `Θ(r_0, i)`, where `r_0` is the outcome of play 0. The outcomes of all
//!   plays cover the whole `~`-class of `r_0`.

mod diagonal;
mod mirror;

pub use diagonal::{capture_alter, verify_theta_relation, DiagonalCaptureResult, ThetaCheck};
pub use mirror::{capture_ego, MirrorCaptureResult, MirrorCheck};

use serde::Serialize;

use crate::bitstream::Word;
use crate::game::Side;

/// One scheduled move of a capture run, in global scheduling order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub play: usize,
    pub side: Side,
    pub word: Word,
    /// 1-based position of an Alter reply in the global reply log.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reply_id: Option<usize>,
}
