use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A natural number or ω. Used as the codomain of Hamming distances on
/// infinite sequences.
///
/// `Finite(n) < Omega` for every `n`, and addition saturates at `Omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedNat {
    Finite(u64),
    Omega,
}

impl ExtendedNat {
    pub const ZERO: ExtendedNat = ExtendedNat::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedNat::Finite(n) => Some(n),
            ExtendedNat::Omega => None,
        }
    }

    /// Whether `self >= n` for a finite threshold `n`.
    pub fn at_least(self, n: u64) -> bool {
        self >= ExtendedNat::Finite(n)
    }
}

impl From<u64> for ExtendedNat {
    fn from(n: u64) -> Self {
        ExtendedNat::Finite(n)
    }
}

impl From<usize> for ExtendedNat {
    fn from(n: usize) -> Self {
        ExtendedNat::Finite(n as u64)
    }
}

impl Add for ExtendedNat {
    type Output = ExtendedNat;

    fn add(self, rhs: ExtendedNat) -> ExtendedNat {
        match (self, rhs) {
            (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) => a
                .checked_add(b)
                .map_or(ExtendedNat::Omega, ExtendedNat::Finite),
            _ => ExtendedNat::Omega,
        }
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNat::Finite(n) => write!(f, "{n}"),
            ExtendedNat::Omega => f.write_str("omega"),
        }
    }
}

// JSON form: a plain number, or the string "omega".
impl Serialize for ExtendedNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedNat::Finite(n) => s.serialize_u64(*n),
            ExtendedNat::Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(n) => Ok(ExtendedNat::Finite(n)),
            Repr::Str(s) if s == "omega" => Ok(ExtendedNat::Omega),
            Repr::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"omega\", got {s:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_dominates_every_finite_value() {
        assert!(ExtendedNat::Finite(u64::MAX) < ExtendedNat::Omega);
        assert!(ExtendedNat::Finite(3) < ExtendedNat::Finite(4));
        assert!(ExtendedNat::Omega.at_least(1_000_000));
    }

    #[test]
    fn addition_saturates() {
        assert_eq!(
            ExtendedNat::Finite(2) + ExtendedNat::Finite(3),
            ExtendedNat::Finite(5)
        );
        assert_eq!(
            ExtendedNat::Finite(2) + ExtendedNat::Omega,
            ExtendedNat::Omega
        );
        assert_eq!(ExtendedNat::Omega + ExtendedNat::Omega, ExtendedNat::Omega);
        assert_eq!(
            ExtendedNat::Finite(u64::MAX) + ExtendedNat::Finite(1),
            ExtendedNat::Omega
        );
    }

    #[test]
    fn json_form() {
        assert_eq!(serde_json::to_string(&ExtendedNat::Finite(3)).unwrap(), "3");
        assert_eq!(
            serde_json::to_string(&ExtendedNat::Omega).unwrap(),
            "\"omega\""
        );
        let back: ExtendedNat = serde_json::from_str("\"omega\"").unwrap();
        assert_eq!(back, ExtendedNat::Omega);
        assert!(serde_json::from_str::<ExtendedNat>("\"inf\"").is_err());
    }
}
