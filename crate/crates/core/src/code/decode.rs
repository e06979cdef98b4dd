use serde::Serialize;

use super::Code;
use crate::bitstream::Word;
use crate::error::{Error, Result};

/// Outcome of nearest-codeword (likelihood) decoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DecodeResult {
    /// The received word is itself a codeword.
    Accepted { word: Word },
    /// A unique nearest codeword at `errors` flips from the received word.
    Corrected { word: Word, errors: usize },
    /// Two or more codewords tie for nearest; decoding fails.
    Ambiguous {
        candidates: Vec<Word>,
        errors: usize,
    },
    /// An error was seen but the nearest codeword lies beyond the decoding
    /// radius.
    DetectedOnly,
}

impl DecodeResult {
    /// The codeword the decoder settled on, if any.
    pub fn decoded(&self) -> Option<&Word> {
        match self {
            DecodeResult::Accepted { word } | DecodeResult::Corrected { word, .. } => Some(word),
            _ => None,
        }
    }
}

/// One simulated transmission over an adversarial bit-flip channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transmission {
    pub sent: Word,
    pub received: Word,
    pub detected: bool,
    pub decode: DecodeResult,
}

impl Transmission {
    pub fn recovered(&self) -> bool {
        self.decode.decoded() == Some(&self.sent)
    }
}

/// The Hamming ball `{y ∈ Z_2^n : hd(y, x) <= d}`, lexicographically.
pub fn ball_ambient(x: &Word, d: usize) -> Vec<Word> {
    let n = x.len();
    let mut out: Vec<Word> = Word::all(n)
        .filter(|y| y.distance(x).expect("same length") <= d)
        .collect();
    out.sort();
    out
}

/// `B_d(x)`: codewords within distance `d` of `x`, or the ambient ball when
/// no code is given.
pub fn ball(x: &Word, d: usize, within: Option<&Code<Word>>) -> Result<Vec<Word>> {
    match within {
        None => Ok(ball_ambient(x, d)),
        Some(code) => {
            if code.n() != x.len() {
                return Err(Error::LengthMismatch {
                    left: code.n(),
                    right: x.len(),
                });
            }
            Ok(code
                .members()
                .iter()
                .filter(|y| y.distance(x).expect("same length") <= d)
                .cloned()
                .collect())
        }
    }
}

impl Code<Word> {
    /// Nearest-codeword decoding. Ties are reported, never broken.
    pub fn decode_nearest(&self, received: &Word) -> Result<DecodeResult> {
        self.decode_within(received, usize::MAX)
    }

    /// Nearest-codeword decoding that gives up (detect only) when the nearest
    /// codeword is farther than `radius`.
    pub fn decode_within(&self, received: &Word, radius: usize) -> Result<DecodeResult> {
        if self.is_empty() {
            return Err(Error::TooFewMembers {
                needed: 1,
                found: 0,
            });
        }
        if received.len() != self.n() {
            return Err(Error::LengthMismatch {
                left: self.n(),
                right: received.len(),
            });
        }
        if self.contains(received) {
            return Ok(DecodeResult::Accepted {
                word: received.clone(),
            });
        }
        let mut best = usize::MAX;
        let mut nearest: Vec<&Word> = Vec::new();
        for word in self.members() {
            let d = word.distance(received)?;
            if d < best {
                best = d;
                nearest.clear();
            }
            if d == best {
                nearest.push(word);
            }
        }
        Ok(if best > radius {
            DecodeResult::DetectedOnly
        } else if let [word] = nearest[..] {
            DecodeResult::Corrected {
                word: word.clone(),
                errors: best,
            }
        } else {
            DecodeResult::Ambiguous {
                candidates: nearest.into_iter().cloned().collect(),
                errors: best,
            }
        })
    }

    /// Send `sent`, flip the bits at `error_positions`, and decode.
    pub fn simulate_transmission(
        &self,
        sent: &Word,
        error_positions: &[usize],
    ) -> Result<Transmission> {
        if !self.contains(sent) {
            return Err(Error::NotAMember(sent.to_string()));
        }
        let mut received = sent.clone();
        let mut seen = vec![false; sent.len()];
        for &p in error_positions {
            if p >= sent.len() {
                return Err(Error::IndexOutOfRange {
                    index: p,
                    len: sent.len(),
                });
            }
            // A set of positions: repeats flip once.
            if !std::mem::replace(&mut seen[p], true) {
                received = received.flip(p)?;
            }
        }
        let detected = !self.contains(&received);
        let decode = self.decode_nearest(&received)?;
        Ok(Transmission {
            sent: sent.clone(),
            received,
            detected,
            decode,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstream::w;
    use crate::FiniteCode;

    fn rep3() -> Code<Word> {
        FiniteCode::new(3, [w("000"), w("111")]).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn ambient_ball_examples() {
        assert_eq!(ball(&w("000"), 0, None).unwrap(), vec![w("000")]);
        assert_eq!(
            ball(&w("000"), 1, None).unwrap(),
            vec![w("000"), w("001"), w("010"), w("100")]
        );
    }

    #[test]
    fn ambient_ball_size_is_binomial_sum() {
        for n in 0..=6 {
            for x in Word::all(n) {
                for d in 0..=n {
                    let expected: usize = (0..=d).map(|j| binomial(n, j)).sum();
                    assert_eq!(ball_ambient(&x, d).len(), expected);
                }
            }
        }
    }

    #[test]
    fn ball_relative_to_code() {
        let c = rep3();
        assert_eq!(ball(&w("100"), 1, Some(&c)).unwrap(), vec![w("000")]);
        assert_eq!(
            ball(&w("100"), 3, Some(&c)).unwrap(),
            vec![w("000"), w("111")]
        );
        assert!(ball(&w("10"), 1, Some(&c)).is_err());
    }

    #[test]
    fn decode_examples() {
        let c = rep3();
        assert_eq!(
            c.decode_nearest(&w("100")).unwrap(),
            DecodeResult::Corrected {
                word: w("000"),
                errors: 1
            }
        );
        assert_eq!(
            c.decode_nearest(&w("110")).unwrap(),
            DecodeResult::Corrected {
                word: w("111"),
                errors: 1
            }
        );
        let c2 = FiniteCode::new(2, [w("00"), w("11")]).unwrap();
        assert_eq!(
            c2.decode_nearest(&w("01")).unwrap(),
            DecodeResult::Ambiguous {
                candidates: vec![w("00"), w("11")],
                errors: 1
            }
        );
        assert_eq!(
            c.decode_nearest(&w("111")).unwrap(),
            DecodeResult::Accepted { word: w("111") }
        );
        assert!(FiniteCode::new(3, [])
            .unwrap()
            .decode_nearest(&w("000"))
            .is_err());
    }

    #[test]
    fn bounded_decoding_detects_only() {
        let c = FiniteCode::new(5, [w("00000"), w("11111")]).unwrap();
        assert_eq!(
            c.decode_within(&w("11000"), 1).unwrap(),
            DecodeResult::DetectedOnly
        );
        assert!(c.decode_within(&w("11000"), 2).unwrap().decoded().is_some());
    }

    #[test]
    fn transmission_examples() {
        let c = rep3();
        let t = c.simulate_transmission(&w("000"), &[]).unwrap();
        assert_eq!(t.received, w("000"));
        assert!(!t.detected);
        assert_eq!(t.decode, DecodeResult::Accepted { word: w("000") });

        let t = c.simulate_transmission(&w("000"), &[0]).unwrap();
        assert_eq!(t.received, w("100"));
        assert!(t.detected && t.recovered());

        let t = c.simulate_transmission(&w("000"), &[0, 1]).unwrap();
        assert_eq!(t.received, w("110"));
        assert!(t.detected);
        assert_eq!(
            t.decode,
            DecodeResult::Corrected {
                word: w("111"),
                errors: 1
            }
        );
        assert!(!t.recovered());

        assert_eq!(
            c.simulate_transmission(&w("010"), &[0]).err(),
            Some(Error::NotAMember("010".into()))
        );
        assert!(c.simulate_transmission(&w("000"), &[3]).is_err());
    }
}
