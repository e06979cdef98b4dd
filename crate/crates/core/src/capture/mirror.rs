use serde::Serialize;

use super::TraceEvent;
use crate::bitstream::Word;
use crate::error::{Error, Result};
use crate::game::{PlayTranscript, Side, Strategy};

/// The initial and mirror plays of an Ego strategy.
#[derive(Debug, Clone, Serialize)]
pub struct MirrorCaptureResult {
    pub initial: PlayTranscript,
    pub mirror: PlayTranscript,
    /// The single coordinate where the outcomes differ: `|ε₀|`.
    pub divergence_index: usize,
    pub trace: Vec<TraceEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MirrorCheck {
    pub initial_follows: bool,
    pub mirror_follows: bool,
    pub common_len: usize,
    pub prefix_distance: usize,
    pub disagreements: Vec<usize>,
}

impl MirrorCheck {
    pub fn passed(&self, divergence_index: usize) -> bool {
        self.initial_follows
            && self.mirror_follows
            && self.prefix_distance == 1
            && self.disagreements == [divergence_index]
    }
}

impl MirrorCaptureResult {
    /// Replay both plays against `ego` and measure the outcome prefixes on
    /// their common length.
    pub fn check(&self, ego: &Strategy) -> Result<MirrorCheck> {
        let a = self.initial.outcome_prefix();
        let b = self.mirror.outcome_prefix();
        let common_len = a.len().min(b.len());
        let disagreements = a
            .prefix(common_len)?
            .disagreements(&b.prefix(common_len)?)?;
        Ok(MirrorCheck {
            initial_follows: self.initial.follows(ego)?,
            mirror_follows: self.mirror.follows(ego)?,
            common_len,
            prefix_distance: disagreements.len(),
            disagreements,
        })
    }
}

/// Capture an Ego strategy with a mirror play.
///
/// Both plays open with Ego's `α₀`. Alter answers `0` in the initial play
/// and `1·α₁` in the mirror play, where `α₁` is Ego's second initial-play
/// move. From then on each Ego move in one play is copied as Alter's next
/// move in the other. The outcomes are `α₀ 0 α₁ β₁ α₂ β₂ …` and
/// `α₀ 1 α₁ β₁ α₂ β₂ …`.
///
/// Each play gets `rounds` Ego moves; the initial play also gets the final
/// copied Alter move so both outcome prefixes have the same length.
pub fn capture_ego(ego: &Strategy, rounds: usize) -> Result<MirrorCaptureResult> {
    if rounds < 2 {
        return Err(Error::InvalidArgument(
            "mirror capture needs at least 2 rounds".into(),
        ));
    }
    if ego.side() != Side::Ego {
        return Err(Error::InvalidArgument(format!(
            "{:?} is not an Ego strategy",
            ego.name()
        )));
    }
    let mut initial: Vec<Word> = Vec::new();
    let mut mirror: Vec<Word> = Vec::new();
    let mut trace = Vec::new();
    let mut record = |play: usize, side: Side, word: &Word| {
        trace.push(TraceEvent {
            play,
            side,
            word: word.clone(),
            reply_id: None,
        })
    };
    const INITIAL: usize = 0;
    const MIRROR: usize = 1;

    let opening = ego.reply(&[])?;
    record(INITIAL, Side::Ego, &opening);
    record(MIRROR, Side::Ego, &opening);
    initial.push(opening.clone());
    mirror.push(opening.clone());

    let zero = Word::zeros(1);
    record(INITIAL, Side::Alter, &zero);
    initial.push(zero);
    let mut alpha = ego.reply(&initial)?;
    record(INITIAL, Side::Ego, &alpha);
    initial.push(alpha.clone());

    let mut one_alpha = Word::repeat(true, 1);
    one_alpha.extend_from(&alpha);
    record(MIRROR, Side::Alter, &one_alpha);
    mirror.push(one_alpha);
    let mut beta = ego.reply(&mirror)?;
    record(MIRROR, Side::Ego, &beta);
    mirror.push(beta.clone());

    for _ in 2..rounds {
        record(INITIAL, Side::Alter, &beta);
        initial.push(beta.clone());
        alpha = ego.reply(&initial)?;
        record(INITIAL, Side::Ego, &alpha);
        initial.push(alpha.clone());

        record(MIRROR, Side::Alter, &alpha);
        mirror.push(alpha.clone());
        beta = ego.reply(&mirror)?;
        record(MIRROR, Side::Ego, &beta);
        mirror.push(beta.clone());
    }
    record(INITIAL, Side::Alter, &beta);
    initial.push(beta);

    let result = MirrorCaptureResult {
        initial: PlayTranscript::from_words(initial),
        mirror: PlayTranscript::from_words(mirror),
        divergence_index: opening.len(),
        trace,
    };
    let check = result.check(ego)?;
    if !check.passed(result.divergence_index) {
        return Err(Error::CaptureInvariant(format!(
            "mirror plays disagree at {:?}, expected only {}",
            check.disagreements, result.divergence_index
        )));
    }
    Ok(result)
}
