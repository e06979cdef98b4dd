use serde::Serialize;

use super::Code;
use crate::bitstream::Word;
use crate::error::{Error, Result};
use crate::FiniteCode;

/// Why an outside word cannot join a k-thin code: some member is within
/// distance `k - 1` of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalityWitness {
    pub outside: Word,
    pub blocker: Word,
    pub distance: usize,
}

impl Code<Word> {
    fn check_k_thin(&self, k: u64) -> Result<()> {
        if self.len() < 2 {
            return Ok(());
        }
        let (d, i, j) = self.closest_pair()?;
        if !d.at_least(k) {
            return Err(Error::NotKThin {
                k,
                left: self.members()[i].to_string(),
                right: self.members()[j].to_string(),
            });
        }
        Ok(())
    }

    /// Greedily grow a k-thin code to a maximal one, scanning `Z_2^n` in
    /// lexicographic order and keeping every word that stays at distance
    /// `>= k` from everything kept so far.
    pub fn extend_to_maximal_thin(&self, k: u64) -> Result<Code<Word>> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "k must be at least 2, got {k}"
            )));
        }
        self.check_k_thin(k)?;
        let mut kept: Vec<Word> = self.members().to_vec();
        for candidate in Word::all(self.n()) {
            let fits = kept
                .iter()
                .all(|m| m.distance(&candidate).expect("same length") as u64 >= k);
            if fits {
                kept.push(candidate);
            }
        }
        FiniteCode::new(self.n(), kept)
    }

    /// For every word outside the code, a member within distance `k - 1`.
    /// Returns `Err(word)` naming the first outside word that could be added
    /// without breaking k-thinness.
    pub fn maximality_witnesses(
        &self,
        k: u64,
    ) -> std::result::Result<Vec<MaximalityWitness>, Word> {
        let mut out = Vec::new();
        for outside in Word::all(self.n()).filter(|x| !self.contains(x)) {
            let blocker = self
                .members()
                .iter()
                .map(|m| (m.distance(&outside).expect("same length"), m))
                .filter(|(d, _)| (*d as u64) < k)
                .min();
            match blocker {
                Some((distance, m)) => out.push(MaximalityWitness {
                    outside,
                    blocker: m.clone(),
                    distance,
                }),
                None => return Err(outside),
            }
        }
        Ok(out)
    }

    /// Exhaustive add-one check: the code is k-thin and no outside word can
    /// be added keeping it k-thin.
    pub fn is_maximal_k_thin(&self, k: u64) -> Result<bool> {
        if !self.is_k_thin(k)? {
            return Ok(false);
        }
        for outside in Word::all(self.n()).filter(|x| !self.contains(x)) {
            if self.with(outside)?.is_k_thin(k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstream::w;

    #[test]
    fn greedy_from_zero_word_gives_even_weight_code() {
        let t = FiniteCode::new(3, [w("000")]).unwrap();
        let max = t.extend_to_maximal_thin(2).unwrap();
        assert_eq!(max.members(), &[w("000"), w("011"), w("101"), w("110")]);
        assert!(max.is_maximal_k_thin(2).unwrap());
    }

    #[test]
    fn maximal_input_is_unchanged() {
        let even = FiniteCode::new(3, [w("000"), w("011"), w("101"), w("110")]).unwrap();
        assert_eq!(
            even.extend_to_maximal_thin(2).unwrap().members(),
            even.members()
        );
    }

    #[test]
    fn rejects_non_thin_input() {
        let t = FiniteCode::new(3, [w("000"), w("001")]).unwrap();
        assert!(matches!(
            t.extend_to_maximal_thin(2),
            Err(Error::NotKThin { k: 2, .. })
        ));
        assert!(t.extend_to_maximal_thin(1).is_err());
    }

    #[test]
    fn witnesses_cover_every_outside_word() {
        for k in 2..=4 {
            let max = FiniteCode::new(4, [w("0110")])
                .unwrap()
                .extend_to_maximal_thin(k)
                .unwrap();
            let witnesses = max.maximality_witnesses(k).unwrap();
            assert_eq!(witnesses.len(), 16 - max.len());
            assert!(witnesses.iter().all(|x| (x.distance as u64) < k));
        }
        let not_max = FiniteCode::new(3, [w("000")]).unwrap();
        assert_eq!(not_max.maximality_witnesses(2), Err(w("011")));
    }
}
