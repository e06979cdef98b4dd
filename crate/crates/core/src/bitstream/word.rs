use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExtendedNat;
use crate::error::{Error, Result};

/// `bit_k(n)`: the k-th binary digit of `n`, counting from the least
/// significant digit.
///
/// Evaluated through the residue `n mod 2^(k+1)`: the digit is 1 exactly when
/// the residue lies in the upper half `2^k ..= 2^(k+1) - 1`.
pub fn bit_k(k: u32, n: u64) -> bool {
    if k >= 64 {
        return false;
    }
    let half = 1u128 << k;
    (n as u128) % (half << 1) >= half
}

/// A finite binary word. Index 0 is the first transmitted bit.
///
/// Words order lexicographically with `0 < 1`, a shorter word sorting before
/// its extensions.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn new(bits: Vec<bool>) -> Self {
        Word(bits)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn zeros(len: usize) -> Self {
        Word(vec![false; len])
    }

    pub fn repeat(bit: bool, len: usize) -> Self {
        Word(vec![bit; len])
    }

    /// The word of length `len` whose bits, read from index 0, are the binary
    /// digits of `rank` from most to least significant. Enumerating ranks
    /// `0..2^len` therefore walks `Z_2^len` in lexicographic order.
    pub fn from_rank(rank: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        Word((0..len).map(|i| (rank >> (len - 1 - i)) & 1 == 1).collect())
    }

    /// Inverse of [`Word::from_rank`].
    pub fn rank(&self) -> u64 {
        debug_assert!(self.len() <= 64);
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    /// All words of length `len`, lexicographically.
    pub fn all(len: usize) -> impl Iterator<Item = Word> {
        assert!(len < 64, "Z_2^{len} is too large to enumerate");
        (0..1u64 << len).map(move |r| Word::from_rank(r, len))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat<'a>(words: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut out = Word::empty();
        for w in words {
            out.extend_from(w);
        }
        out
    }

    pub fn prefix(&self, len: usize) -> Result<Word> {
        if len > self.len() {
            return Err(Error::IndexOutOfRange {
                index: len,
                len: self.len(),
            });
        }
        Ok(Word(self.0[..len].to_vec()))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `x^{#n}`: the word with bit `n` inverted.
    pub fn flip(&self, n: usize) -> Result<Word> {
        if n >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.len(),
            });
        }
        let mut bits = self.0.clone();
        bits[n] = !bits[n];
        Ok(Word(bits))
    }

    /// Flip every listed position. Positions may repeat; each occurrence
    /// toggles once.
    pub fn flip_all(&self, positions: impl IntoIterator<Item = usize>) -> Result<Word> {
        let mut bits = self.0.clone();
        for n in positions {
            let len = bits.len();
            let b = bits
                .get_mut(n)
                .ok_or(Error::IndexOutOfRange { index: n, len })?;
            *b = !*b;
        }
        Ok(Word(bits))
    }

    /// `Θ(x, m)`: xor bit `k` of the word with `bit_k(m)`. Requires
    /// `m <= 2^len - 1`.
    pub fn theta(&self, m: u64) -> Result<Word> {
        let fits = self.len() >= 64 || m >> self.len() == 0;
        if !fits {
            return Err(Error::ThetaOutOfRange { m, len: self.len() });
        }
        Ok(Word(
            self.0
                .iter()
                .enumerate()
                .map(|(k, &b)| b ^ bit_k(k as u32, m))
                .collect(),
        ))
    }

    /// Coordinates where `self` and `other` differ.
    pub fn disagreements(&self, other: &Word) -> Result<Vec<usize>> {
        self.check_len(other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .enumerate()
            .filter_map(|(i, (a, b))| (a != b).then_some(i))
            .collect())
    }

    /// Hamming distance as a plain count.
    pub fn distance(&self, other: &Word) -> Result<usize> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count())
    }

    /// Hamming distance. Always finite for words.
    pub fn hd(&self, other: &Word) -> Result<ExtendedNat> {
        self.distance(other).map(ExtendedNat::from)
    }

    /// The word with coordinate `n` removed (the projection that forgets
    /// coordinate `n`).
    pub fn delete(&self, n: usize) -> Result<Word> {
        if n >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.len(),
            });
        }
        let mut bits = self.0.clone();
        bits.remove(n);
        Ok(Word(bits))
    }

    fn check_len(&self, other: &Word) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }
}

impl From<Vec<bool>> for Word {
    fn from(bits: Vec<bool>) -> Self {
        Word(bits)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: parse a 0/1 literal, panicking on bad input.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid 0/1 literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_k_examples() {
        assert!(!bit_k(0, 6));
        assert!(bit_k(1, 6));
        assert!(bit_k(2, 6));
        assert!((0..70).all(|k| !bit_k(k, 0)));
        assert!(bit_k(3, 8));
        assert!(!bit_k(3, 16));
        assert!(bit_k(63, u64::MAX));
    }

    #[test]
    fn bit_k_agrees_with_shifts() {
        for n in 0..1024u64 {
            for k in 0..12 {
                assert_eq!(bit_k(k, n), (n >> k) & 1 == 1, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn hd_examples() {
        assert_eq!(w("0101").hd(&w("0101")).unwrap(), ExtendedNat::Finite(0));
        assert_eq!(w("000").hd(&w("111")).unwrap(), ExtendedNat::Finite(3));
        assert_eq!(
            w("00").hd(&w("000")),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn theta_examples() {
        assert_eq!(w("0000").theta(0).unwrap(), w("0000"));
        assert_eq!(w("0000").theta(5).unwrap(), w("1010"));
        assert_eq!(
            w("000").theta(8),
            Err(Error::ThetaOutOfRange { m: 8, len: 3 })
        );
        assert_eq!(w("000").theta(7).unwrap(), w("111"));
    }

    #[test]
    fn flip_examples() {
        assert_eq!(w("000").flip(1).unwrap(), w("010"));
        assert_eq!(
            w("000").flip(3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        );
        assert_eq!(w("0110").flip_all([0, 3, 3]).unwrap(), w("1110"));
    }

    #[test]
    fn rank_round_trip_and_order() {
        let all: Vec<Word> = Word::all(3).collect();
        assert_eq!(all.len(), 8);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
        for (r, word) in all.iter().enumerate() {
            assert_eq!(word.rank(), r as u64);
        }
        assert_eq!(all[3], w("011"));
    }

    #[test]
    fn parse_rejects_other_characters() {
        assert_eq!("012".parse::<Word>(), Err(Error::InvalidWord("012".into())));
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
    }

    #[test]
    fn delete_coordinate() {
        assert_eq!(w("0110").delete(0).unwrap(), w("110"));
        assert_eq!(w("0110").delete(2).unwrap(), w("010"));
    }
}
