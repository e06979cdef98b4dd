//! Codes as sets of admissible messages: minimum distance, detection and
//! correction predicates, thin and k-thin checks.

mod decode;
mod maximal;

pub use decode::{ball, ball_ambient, DecodeResult, Transmission};
pub use maximal::MaximalityWitness;

use std::collections::HashSet;

use serde::Serialize;

use crate::bitstream::{ExtendedNat, HammingPoint, Stream, Word};
use crate::error::{Error, Result};
use crate::FiniteCode;
#[cfg(test)]
use crate::StreamCode;

/// A finite set of points of `Z_2^n`, `n` finite or ω.
///
/// Members have a common length and are kept without duplicates. Word codes
/// are additionally kept in lexicographic order.
#[derive(Debug, Clone, Serialize)]
pub struct Code<P> {
    length: ExtendedNat,
    members: Vec<P>,
}

impl Code<Word> {
    /// A code inside `Z_2^n`. Duplicates are dropped.
    pub fn new(n: usize, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut members: Vec<Word> = words.into_iter().collect();
        if let Some(bad) = members.iter().find(|w| w.len() != n) {
            return Err(Error::LengthMismatch {
                left: n,
                right: bad.len(),
            });
        }
        members.sort();
        members.dedup();
        Ok(Code {
            length: ExtendedNat::from(n),
            members,
        })
    }

    /// Parse newline-separated 0/1 words. Blank lines and lines starting
    /// with `#` are skipped. The length is taken from the first word.
    pub fn parse(text: &str) -> Result<Self> {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<Word>>>()?;
        let n = words.first().map_or(0, Word::len);
        FiniteCode::new(n, words)
    }

    /// Every word of `Z_2^n`.
    pub fn universe(n: usize) -> Self {
        Code {
            length: ExtendedNat::from(n),
            members: Word::all(n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.length.finite().unwrap_or_default() as usize
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.members.binary_search(word).is_ok()
    }

    pub fn with(&self, word: Word) -> Result<Self> {
        FiniteCode::new(self.n(), self.members.iter().cloned().chain([word]))
    }

    /// Per-coordinate form of the thinness check: for every coordinate, the
    /// projection forgetting it is injective on the code.
    pub fn projections_injective(&self) -> bool {
        (0..self.n()).all(|c| {
            let mut seen = HashSet::with_capacity(self.members.len());
            self.members
                .iter()
                .all(|word| seen.insert(word.delete(c).expect("coordinate in range")))
        })
    }
}

impl Code<Stream> {
    /// A code of closed-form streams. Points equal as streams are merged.
    pub fn new(streams: impl IntoIterator<Item = Stream>) -> Result<Self> {
        let mut members: Vec<Stream> = Vec::new();
        for s in streams {
            if !s.is_closed_form() {
                return Err(Error::NotClosedForm { op: "stream code" });
            }
            let mut duplicate = false;
            for m in &members {
                if m.same_point(&s)? {
                    duplicate = true;
                    break;
                }
            }
            if !duplicate {
                members.push(s);
            }
        }
        Ok(Code {
            length: ExtendedNat::Omega,
            members,
        })
    }
}

/// Outcome of checking the three equivalent formulations of thinness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThinReport {
    /// Every single-coordinate projection is injective on the code.
    pub projections_injective: bool,
    /// Every `~`-class of the code is thin.
    pub classes_thin: bool,
    /// Minimum distance is at least 2 (vacuous below two members).
    pub min_distance_at_least_two: bool,
    /// Member indices grouped by `~`-class.
    pub classes: Vec<Vec<usize>>,
    /// A pair at distance exactly 1, with the coordinate they differ at.
    pub witness: Option<(usize, usize, usize)>,
}

impl ThinReport {
    pub fn consistent(&self) -> bool {
        self.projections_injective == self.classes_thin
            && self.classes_thin == self.min_distance_at_least_two
    }

    pub fn is_thin(&self) -> bool {
        self.projections_injective
    }
}

impl<P: HammingPoint> Code<P> {
    pub fn length(&self) -> ExtendedNat {
        self.length
    }

    pub fn members(&self) -> &[P] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.members.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    /// Minimum distance `HD(T)` with the pair that attains it.
    pub fn closest_pair(&self) -> Result<(ExtendedNat, usize, usize)> {
        if self.members.len() < 2 {
            return Err(Error::TooFewMembers {
                needed: 2,
                found: self.members.len(),
            });
        }
        let mut best = (ExtendedNat::Omega, 0, 1);
        for (i, j) in self.pairs() {
            let d = self.members[i].hd(&self.members[j])?;
            if d < best.0 {
                best = (d, i, j);
                if d == ExtendedNat::Finite(1) {
                    break;
                }
            }
        }
        Ok(best)
    }

    /// `HD(T)`: the least distance between two distinct members.
    pub fn min_distance(&self) -> Result<ExtendedNat> {
        self.closest_pair().map(|(d, _, _)| d)
    }

    /// The code detects `k` errors iff `HD(T) >= k + 1`.
    pub fn detects(&self, k: u64) -> Result<bool> {
        Ok(self.min_distance()?.at_least(k + 1))
    }

    /// The code corrects `k` errors iff `HD(T) >= 2k + 1`.
    pub fn corrects(&self, k: u64) -> Result<bool> {
        Ok(self.min_distance()?.at_least(2 * k + 1))
    }

    /// Minimum distance is at least `k`. Empty codes and singletons qualify.
    pub fn is_k_thin(&self, k: u64) -> Result<bool> {
        if self.members.len() < 2 {
            return Ok(true);
        }
        Ok(self.min_distance()?.at_least(k))
    }

    /// Thinness through projections: no coordinate `c` such that forgetting
    /// `c` identifies two members.
    pub fn is_thin(&self) -> Result<bool> {
        let thin = self.projection_collision()?.is_none();
        debug_assert_eq!(
            thin,
            self.is_k_thin(2)?,
            "projection and distance routes disagree"
        );
        Ok(thin)
    }

    /// A pair `(i, j)` and coordinate `c` such that deleting `c` makes
    /// members `i` and `j` equal.
    ///
    /// Deleting a coordinate where two points agree keeps them apart, so
    /// only coordinates in a finite disagreement set can collide.
    pub fn projection_collision(&self) -> Result<Option<(usize, usize, usize)>> {
        Self::collision_among(&self.members, self.pairs())
    }

    fn collision_among(
        members: &[P],
        pairs: impl Iterator<Item = (usize, usize)>,
    ) -> Result<Option<(usize, usize, usize)>> {
        for (i, j) in pairs {
            let Some(diff) = members[i].disagreements(&members[j])? else {
                continue;
            };
            for c in diff {
                if members[i].delete(c)?.same_point(&members[j].delete(c)?)? {
                    return Ok(Some((i, j, c)));
                }
            }
        }
        Ok(None)
    }

    /// Partition of member indices into `~`-classes (finite mutual
    /// distance), each class listed in member order.
    pub fn sim_classes(&self) -> Result<Vec<Vec<usize>>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        'next: for i in 0..self.members.len() {
            for class in classes.iter_mut() {
                if self.members[class[0]].hd(&self.members[i])?.is_finite() {
                    class.push(i);
                    continue 'next;
                }
            }
            classes.push(vec![i]);
        }
        Ok(classes)
    }
}

/// Summary of a finite code's error-handling capacity.
#[derive(Debug, Clone, Serialize)]
pub struct CodeAnalysis {
    pub n: usize,
    pub size: usize,
    /// Absent for codes with fewer than two members.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<ExtendedNat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closest_pair: Option<(Word, Word)>,
    /// Largest `k` with `detects(k)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detects_up_to: Option<ExtendedNat>,
    /// Largest `k` with `corrects(k)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrects_up_to: Option<ExtendedNat>,
    pub thin: bool,
    pub thin_report: ThinReport,
}

impl Code<Word> {
    pub fn analyze(&self) -> Result<CodeAnalysis> {
        let closest = match self.closest_pair() {
            Ok(c) => Some(c),
            Err(Error::TooFewMembers { .. }) => None,
            Err(e) => return Err(e),
        };
        let min_distance = closest.map(|(d, _, _)| d);
        let capacity = |f: fn(u64) -> u64| {
            min_distance.map(|d| match d {
                ExtendedNat::Finite(d) => ExtendedNat::Finite(f(d)),
                ExtendedNat::Omega => ExtendedNat::Omega,
            })
        };
        Ok(CodeAnalysis {
            n: self.n(),
            size: self.len(),
            min_distance,
            closest_pair: closest
                .map(|(_, i, j)| (self.members[i].clone(), self.members[j].clone())),
            detects_up_to: capacity(|d| d - 1),
            corrects_up_to: capacity(|d| (d - 1) / 2),
            thin: self.is_thin()?,
            thin_report: self.thin_equivalence_report()?,
        })
    }
}

impl<P: HammingPoint> Code<P> {
    /// Evaluate all three formulations of thinness side by side.
    pub fn thin_equivalence_report(&self) -> Result<ThinReport> {
        let collision = self.projection_collision()?;
        let classes = self.sim_classes()?;
        let mut classes_thin = true;
        for class in &classes {
            let pairs = class
                .iter()
                .enumerate()
                .flat_map(|(a, &i)| class[a + 1..].iter().map(move |&j| (i, j)));
            if Self::collision_among(&self.members, pairs)?.is_some() {
                classes_thin = false;
                break;
            }
        }
        let min_distance_at_least_two = self.is_k_thin(2)?;
        Ok(ThinReport {
            projections_injective: collision.is_none(),
            classes_thin,
            min_distance_at_least_two,
            classes,
            witness: collision,
        })
    }
}
