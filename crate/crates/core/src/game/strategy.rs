use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::Side;
use crate::bitstream::Word;
use crate::error::{Error, Result};

type ReplyFn = Arc<dyn Fn(&[Word]) -> Word + Send + Sync>;

/// A deterministic reply function from move histories to nonempty words.
///
/// The history handed to a strategy is the complete, interleaved list of
/// moves of the play so far, starting with Ego's opening. Ego replies to
/// histories of even length (including the empty one), Alter to odd ones.
#[derive(Clone)]
pub struct Strategy {
    side: Side,
    name: String,
    spec: Option<StrategySpec>,
    reply: ReplyFn,
}

impl Strategy {
    pub fn new(
        side: Side,
        name: impl Into<String>,
        reply: impl Fn(&[Word]) -> Word + Send + Sync + 'static,
    ) -> Self {
        Strategy {
            side,
            name: name.into(),
            spec: None,
            reply: Arc::new(reply),
        }
    }

    /// Always answer with the same word.
    pub fn constant(side: Side, word: Word) -> Self {
        let spec = StrategySpec {
            name: format!("constant-{word}"),
            side,
            table: Vec::new(),
            fallback: Fallback::Constant(word),
        };
        Strategy::from_spec(spec)
    }

    /// Alter strategy repeating the opponent's last move.
    pub fn copycat() -> Self {
        Strategy::new(Side::Alter, "copycat", |history: &[Word]| {
            history.last().cloned().unwrap_or_default()
        })
    }

    pub fn from_spec(spec: StrategySpec) -> Self {
        let table: BTreeMap<Vec<Word>, Word> = spec
            .table
            .iter()
            .map(|e| (e.history.clone(), e.reply.clone()))
            .collect();
        let fallback = spec.fallback.clone();
        Strategy {
            side: spec.side,
            name: spec.name.clone(),
            spec: Some(spec),
            reply: Arc::new(move |history: &[Word]| match table.get(history) {
                Some(word) => word.clone(),
                None => fallback.reply(history),
            }),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The serializable description, for table-backed strategies.
    pub fn spec(&self) -> Option<&StrategySpec> {
        self.spec.as_ref()
    }

    /// The next move after `history`. Fails when the strategy breaks its
    /// contract (empty move) or is asked out of turn.
    pub fn reply(&self, history: &[Word]) -> Result<Word> {
        if Side::to_move(history.len()) != self.side {
            return Err(Error::InvalidArgument(format!(
                "{:?} strategy {:?} asked to move after {} moves",
                self.side,
                self.name,
                history.len()
            )));
        }
        let word = (self.reply)(history);
        if word.is_empty() {
            return Err(Error::EmptyMove {
                side: self.side,
                name: self.name.clone(),
                history: history.iter().map(Word::to_string).collect(),
            });
        }
        Ok(word)
    }
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Strategy")
            .field("side", &self.side)
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// Serialized strategy: a lookup table on exact histories plus a fallback.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategySpec {
    pub name: String,
    pub side: Side,
    #[serde(default)]
    pub table: Vec<TableEntry>,
    pub fallback: Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub history: Vec<Word>,
    pub reply: Word,
}

/// Reply used when the history is not in the table.
///
/// In JSON a constant fallback is a plain 0/1 string; a hashed fallback is
/// `{"seed": .., "max_len": ..}` and answers with a word derived from a
/// SHA-256 digest of the seed and the history.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Fallback {
    Constant(Word),
    Hashed { seed: u64, max_len: usize },
}

impl Fallback {
    fn reply(&self, history: &[Word]) -> Word {
        match self {
            Fallback::Constant(w) => w.clone(),
            Fallback::Hashed { seed, max_len } => hashed_word(*seed, *max_len, history),
        }
    }
}

fn hashed_word(seed: u64, max_len: usize, history: &[Word]) -> Word {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    for m in history {
        hasher.update(m.to_string().as_bytes());
        hasher.update(b",");
    }
    let digest = hasher.finalize();
    let max_len = max_len.clamp(1, 8 * (digest.len() - 1));
    let len = 1 + digest[0] as usize % max_len;
    Word::new(
        (0..len)
            .map(|i| (digest[1 + i / 8] >> (i % 8)) & 1 == 1)
            .collect(),
    )
}

/// A reproducible random corpus of `size` table strategies for `side`.
///
/// Each strategy has a random opening or first reply, table entries on a
/// random selection of short histories built from words of length 1 or 2,
/// and a hashed fallback with its own seed.
pub fn random_corpus(side: Side, seed: u64, size: usize) -> Vec<StrategySpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let short: Vec<Word> = (1..=2).flat_map(Word::all).collect();
    (0..size)
        .map(|idx| {
            let mut table = Vec::new();
            let depth = match side {
                Side::Ego => 0,
                Side::Alter => 1,
            };
            let first_histories: Vec<Vec<Word>> = if depth == 0 {
                vec![Vec::new()]
            } else {
                short.iter().map(|w| vec![w.clone()]).collect()
            };
            for history in first_histories {
                table.push(TableEntry {
                    history,
                    reply: random_word(&mut rng, 3),
                });
            }
            for _ in 0..rng.gen_range(0..6) {
                let history: Vec<Word> = (0..depth + 2)
                    .map(|_| short[rng.gen_range(0..short.len())].clone())
                    .collect();
                if table.iter().all(|e| e.history != history) {
                    table.push(TableEntry {
                        history,
                        reply: random_word(&mut rng, 3),
                    });
                }
            }
            StrategySpec {
                name: format!("{}-{seed}-{idx}", side.label()),
                side,
                table,
                fallback: Fallback::Hashed {
                    seed: rng.gen(),
                    max_len: rng.gen_range(1..=3),
                },
            }
        })
        .collect()
}

fn random_word(rng: &mut impl Rng, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word::new((0..len).map(|_| rng.gen()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstream::w;

    #[test]
    fn table_lookup_then_fallback() {
        let spec = StrategySpec {
            name: "t".into(),
            side: Side::Alter,
            table: vec![TableEntry {
                history: vec![w("1")],
                reply: w("00"),
            }],
            fallback: Fallback::Constant(w("1")),
        };
        let s = Strategy::from_spec(spec);
        assert_eq!(s.reply(&[w("1")]).unwrap(), w("00"));
        assert_eq!(s.reply(&[w("0")]).unwrap(), w("1"));
    }

    #[test]
    fn out_of_turn_and_empty_moves_are_errors() {
        let ego = Strategy::constant(Side::Ego, w("1"));
        assert!(ego.reply(&[w("1")]).is_err());
        let bad = Strategy::new(Side::Ego, "mute", |_: &[Word]| Word::empty());
        assert_eq!(
            bad.reply(&[]),
            Err(Error::EmptyMove {
                side: Side::Ego,
                name: "mute".into(),
                history: vec![]
            })
        );
    }

    #[test]
    fn hashed_fallback_is_deterministic_and_bounded() {
        let f = Fallback::Hashed {
            seed: 7,
            max_len: 3,
        };
        let h = [w("01"), w("1")];
        assert_eq!(f.reply(&h), f.reply(&h));
        for n in 0..50u64 {
            let word = f.reply(&[Word::from_rank(n, 7)]);
            assert!((1..=3).contains(&word.len()));
        }
    }

    #[test]
    fn corpus_is_reproducible_and_serializable() {
        let a = random_corpus(Side::Alter, 11, 5);
        assert_eq!(a, random_corpus(Side::Alter, 11, 5));
        assert_ne!(a, random_corpus(Side::Alter, 12, 5));
        let json = serde_json::to_string(&a).unwrap();
        let back: Vec<StrategySpec> = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn fallback_json_forms() {
        let c: Fallback = serde_json::from_str("\"0110\"").unwrap();
        assert_eq!(c, Fallback::Constant(w("0110")));
        let h: Fallback = serde_json::from_str(r#"{"seed":3,"max_len":2}"#).unwrap();
        assert_eq!(
            h,
            Fallback::Hashed {
                seed: 3,
                max_len: 2
            }
        );
    }
}
