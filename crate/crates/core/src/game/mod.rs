//! The Banach-Mazur game `G(F)` on the binary tree.
//!
//! Ego opens, then the players alternate, each extending the current finite
//! path by a nonempty word. The outcome of a play is the concatenation of
//! all moves; Ego wins iff it lies in `F`. Only what a finite prefix
//! certifies about the outcome is ever reported.

mod strategy;
mod target;

pub use strategy::{random_corpus, Fallback, Strategy, StrategySpec, TableEntry};
pub use target::{CodeCylinders, Cylinder, NoConsecutiveOnes, OracleTarget, TargetSet, Verdict};

use serde::{Deserialize, Serialize};

use crate::bitstream::Word;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Ego,
    Alter,
}

impl Side {
    /// Who moves after `moves_so_far` moves.
    pub fn to_move(moves_so_far: usize) -> Side {
        if moves_so_far.is_multiple_of(2) {
            Side::Ego
        } else {
            Side::Alter
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Ego => "ego",
            Side::Alter => "alter",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Move {
    pub side: Side,
    pub word: Word,
}

/// The alternating record `ε₀ α₁ ε₁ α₂ …` of one play.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PlayTranscript {
    moves: Vec<Move>,
}

impl PlayTranscript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from raw move words, attributing them alternately starting
    /// with Ego.
    pub fn from_words(words: impl IntoIterator<Item = Word>) -> Self {
        let mut t = PlayTranscript::new();
        for w in words {
            t.push(w);
        }
        t
    }

    pub fn push(&mut self, word: Word) {
        let side = Side::to_move(self.moves.len());
        self.moves.push(Move { side, word });
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn words(&self) -> Vec<Word> {
        self.moves.iter().map(|m| m.word.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Number of Ego moves made.
    pub fn rounds(&self) -> usize {
        self.moves.len().div_ceil(2)
    }

    /// Concatenation of every move: the certified prefix of the outcome.
    pub fn outcome_prefix(&self) -> Word {
        Word::concat(self.moves.iter().map(|m| &m.word))
    }

    pub fn outcome_len(&self) -> usize {
        self.moves.iter().map(|m| m.word.len()).sum()
    }

    /// Replace the word of move `index`. Used to build corrupted transcripts
    /// in tests of the checkers.
    pub fn set_word(&mut self, index: usize, word: Word) {
        self.moves[index].word = word;
    }

    /// Index of the first move by `strategy`'s side that differs from what
    /// the strategy replies to the preceding history.
    pub fn first_deviation(&self, strategy: &Strategy) -> Result<Option<usize>> {
        let words = self.words();
        for (i, m) in self.moves.iter().enumerate() {
            if m.side == strategy.side() && strategy.reply(&words[..i])? != m.word {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Every move of `strategy`'s side is the strategy's reply.
    pub fn follows(&self, strategy: &Strategy) -> Result<bool> {
        Ok(self.first_deviation(strategy)?.is_none())
    }
}

/// Play `rounds` rounds of Ego's `ego` against Alter's `alter`: `rounds` Ego
/// moves interleaved with `rounds - 1` Alter moves.
pub fn play(ego: &Strategy, alter: &Strategy, rounds: usize) -> Result<PlayTranscript> {
    if rounds == 0 {
        return Err(Error::InvalidArgument(
            "a play needs at least one round".into(),
        ));
    }
    check_side(ego, Side::Ego)?;
    check_side(alter, Side::Alter)?;
    let mut history: Vec<Word> = Vec::with_capacity(2 * rounds);
    while history.len() < 2 * rounds - 1 {
        let mover = match Side::to_move(history.len()) {
            Side::Ego => ego,
            Side::Alter => alter,
        };
        let word = mover.reply(&history)?;
        history.push(word);
    }
    Ok(PlayTranscript::from_words(history))
}

fn check_side(strategy: &Strategy, side: Side) -> Result<()> {
    if strategy.side() != side {
        return Err(Error::InvalidArgument(format!(
            "strategy {:?} plays {:?}, expected {:?}",
            strategy.name(),
            strategy.side(),
            side
        )));
    }
    Ok(())
}

/// The verdict of `target` on the transcript's outcome prefix.
///
/// Every bit-prefix of the outcome is queried; an oracle that changes a
/// decided verdict on a longer prefix is reported as a contract error.
pub fn evaluate(target: &dyn TargetSet, transcript: &PlayTranscript) -> Result<Verdict> {
    evaluate_prefix(target, &transcript.outcome_prefix())
}

pub fn evaluate_prefix(target: &dyn TargetSet, outcome: &Word) -> Result<Verdict> {
    let mut decided: Option<(usize, Verdict)> = None;
    let mut last = Verdict::Undecided;
    for len in 0..=outcome.len() {
        let v = target.verdict(&outcome.prefix(len)?);
        if let Some((at, earlier)) = decided {
            if v != earlier {
                return Err(Error::NonMonotoneOracle {
                    name: target.name(),
                    at,
                    earlier: earlier.to_string(),
                    then: len,
                    later: v.to_string(),
                });
            }
        } else if v != Verdict::Undecided {
            decided = Some((len, v));
        }
        last = v;
    }
    Ok(last)
}
