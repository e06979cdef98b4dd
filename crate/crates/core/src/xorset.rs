//! Xor-sets and parity partitions.
//!
//! A xor-set contains exactly one of `x` and `x^{#n}` for every point `x`
//! and coordinate `n`. Inside one `~`-class this means picking one of the
//! two `≈`-halves (even or odd distance to a base point). Only one anchored
//! class is represented at a time; no global selector is built.
//!
//! The finite analogue on `Z_2^n` is the split by weight parity.

use serde::Serialize;

use crate::bitstream::{Stream, Word};
use crate::error::{Error, Result};
use crate::FiniteCode;

/// `hd(x, base) mod 2`: which `≈`-half of the class of `base` holds `x`.
pub fn parity_class(x: &Stream, base: &Stream) -> Result<bool> {
    match x.hd(base)?.finite() {
        Some(d) => Ok(d % 2 == 1),
        None => Err(Error::NotRelated),
    }
}

/// One `~`-class, anchored at `base`, together with the `≈`-half a xor-set
/// selects there.
#[derive(Debug, Clone, Serialize)]
pub struct AnchoredClass {
    pub base: Stream,
    pub label: bool,
}

impl AnchoredClass {
    pub fn new(base: Stream, label: bool) -> Result<Self> {
        if !base.is_closed_form() {
            return Err(Error::NotClosedForm {
                op: "anchored class",
            });
        }
        Ok(AnchoredClass { base, label })
    }

    /// Membership of `x` in the selected half. `x` must lie in the class.
    pub fn contains(&self, x: &Stream) -> Result<bool> {
        Ok(parity_class(x, &self.base)? == self.label)
    }

    /// The other half of the same class.
    pub fn complement(&self) -> AnchoredClass {
        AnchoredClass {
            base: self.base.clone(),
            label: !self.label,
        }
    }
}

/// Even-weight and odd-weight words of `Z_2^n`.
pub fn parity_partition(n: usize) -> Result<(FiniteCode, FiniteCode)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "parity partition needs n >= 2, got {n}"
        )));
    }
    let (even, odd): (Vec<Word>, Vec<Word>) = Word::all(n).partition(|x| x.weight() % 2 == 0);
    Ok((FiniteCode::new(n, even)?, FiniteCode::new(n, odd)?))
}

/// A word `x` and coordinate `j` breaking `x ∈ S ⟺ x^{#j} ∉ S`.
pub fn xor_axiom_violation(set: &FiniteCode) -> Option<(Word, usize)> {
    let n = set.n();
    Word::all(n).find_map(|x| {
        let inside = set.contains(&x);
        (0..n)
            .find(|&j| set.contains(&x.flip(j).expect("j < n")) == inside)
            .map(|j| (x.clone(), j))
    })
}

/// Whether `set` satisfies the xor axiom on `Z_2^n`.
pub fn is_xorset_finite(set: &FiniteCode) -> bool {
    xor_axiom_violation(set).is_none()
}

/// Outcome of checking that two thin sets covering `Z_2^n` are disjoint
/// xor-sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub t0_thin: bool,
    pub t1_thin: bool,
    /// Both parts thin, so the implication applies.
    pub applicable: bool,
    pub disjoint: bool,
    pub t0_xor: bool,
    pub t1_xor: bool,
    /// The implication holds (vacuously when not applicable).
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// For a cover `T0 ∪ T1 = Z_2^n`: if both parts are thin, they must be
/// disjoint xor-sets.
pub fn verify_partition_implies_xor(t0: &FiniteCode, t1: &FiniteCode) -> Result<CoverReport> {
    let n = t0.n();
    if t1.n() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: t1.n(),
        });
    }
    if let Some(missing) = Word::all(n).find(|x| !t0.contains(x) && !t1.contains(x)) {
        return Err(Error::CoverViolated {
            n,
            missing: missing.to_string(),
        });
    }
    let t0_thin = t0.is_thin()?;
    let t1_thin = t1.is_thin()?;
    let applicable = t0_thin && t1_thin;
    let shared = t0.members().iter().find(|x| t1.contains(x));
    let v0 = xor_axiom_violation(t0);
    let v1 = xor_axiom_violation(t1);
    let disjoint = shared.is_none();
    let holds = !applicable || (disjoint && v0.is_none() && v1.is_none());
    let witness = if holds {
        None
    } else if let Some(x) = shared {
        Some(format!("{x} lies in both parts"))
    } else {
        v0.map(|(x, j)| format!("T0 breaks the xor axiom at {x}, coordinate {j}"))
            .or_else(|| v1.map(|(x, j)| format!("T1 breaks the xor axiom at {x}, coordinate {j}")))
    };
    Ok(CoverReport {
        t0_thin,
        t1_thin,
        applicable,
        disjoint,
        t0_xor: is_xorset_finite(t0),
        t1_xor: is_xorset_finite(t1),
        holds,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstream::w;
    use crate::ExtendedNat;

    fn base() -> Stream {
        Stream::periodic(w("1"), w("001")).unwrap()
    }

    #[test]
    fn parity_class_examples() {
        let b = base();
        assert!(!parity_class(&b, &b).unwrap());
        assert!(parity_class(&b.flip(7).unwrap(), &b).unwrap());
        assert!(!parity_class(&b.flip_all(&[2, 9]).unwrap(), &b).unwrap());
        assert_eq!(parity_class(&Stream::zeros(), &b), Err(Error::NotRelated));
    }

    #[test]
    fn anchored_membership() {
        let s = AnchoredClass::new(base(), false).unwrap();
        assert!(s.contains(&base()).unwrap());
        for n in 0..20 {
            let x = base().flip(n).unwrap();
            assert!(!s.contains(&x).unwrap());
            assert!(s.complement().contains(&x).unwrap());
        }
        assert!(AnchoredClass::new(Stream::generated(3, |_| true), true).is_err());
    }

    #[test]
    fn parity_partition_small() {
        let (t0, t1) = parity_partition(2).unwrap();
        assert_eq!(t0.members(), &[w("00"), w("11")]);
        assert_eq!(t1.members(), &[w("01"), w("10")]);
        assert_eq!(t0.min_distance().unwrap(), ExtendedNat::Finite(2));
        assert_eq!(t1.min_distance().unwrap(), ExtendedNat::Finite(2));
        assert!(parity_partition(1).is_err());
    }

    #[test]
    fn finite_xor_examples() {
        let (even, odd) = parity_partition(4).unwrap();
        assert!(is_xorset_finite(&even) && is_xorset_finite(&odd));
        let empty = FiniteCode::new(3, []).unwrap();
        assert_eq!(xor_axiom_violation(&empty), Some((w("000"), 0)));
    }

    #[test]
    fn non_thin_cover_is_not_applicable() {
        let all = FiniteCode::universe(3);
        let (even, _) = parity_partition(3).unwrap();
        let r = verify_partition_implies_xor(&all, &even).unwrap();
        assert!(!r.applicable && r.holds);
        assert!(!r.t0_thin && r.t1_thin);
    }

    #[test]
    fn missing_word_is_an_error() {
        let (even, _) = parity_partition(3).unwrap();
        assert_eq!(
            verify_partition_implies_xor(&even, &even),
            Err(Error::CoverViolated {
                n: 3,
                missing: "001".into()
            })
        );
    }
}
