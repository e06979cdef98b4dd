use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bitstream::Word;
use crate::FiniteCode;

/// What a finite prefix certifies about membership of every infinite
/// extension in the target set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Every extension lies in the set: Ego has won.
    In,
    /// No extension lies in the set: Alter has won.
    Out,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::In => "in",
            Verdict::Out => "out",
            Verdict::Undecided => "undecided",
        })
    }
}

/// A target set `F` of the game, seen through a three-valued prefix oracle.
///
/// Once a prefix is decided, every extension must get the same verdict.
pub trait TargetSet: Send + Sync {
    fn name(&self) -> String;
    fn verdict(&self, prefix: &Word) -> Verdict;
}

/// The clopen cylinder of all sequences starting with `word`.
#[derive(Debug, Clone)]
pub struct Cylinder(pub Word);

impl TargetSet for Cylinder {
    fn name(&self) -> String {
        format!("cylinder({})", self.0)
    }

    fn verdict(&self, prefix: &Word) -> Verdict {
        let common = prefix.len().min(self.0.len());
        if prefix.bits()[..common] != self.0.bits()[..common] {
            Verdict::Out
        } else if prefix.len() >= self.0.len() {
            Verdict::In
        } else {
            Verdict::Undecided
        }
    }
}

/// The closed set of sequences with no two consecutive ones. Membership is
/// never certified at finite depth; exclusion is, on seeing `11`.
#[derive(Debug, Clone, Copy)]
pub struct NoConsecutiveOnes;

impl TargetSet for NoConsecutiveOnes {
    fn name(&self) -> String {
        "no-consecutive-ones".into()
    }

    fn verdict(&self, prefix: &Word) -> Verdict {
        if prefix.bits().windows(2).any(|p| p[0] && p[1]) {
            Verdict::Out
        } else {
            Verdict::Undecided
        }
    }
}

/// Sequences whose first `n` bits form a word of a finite code: the clopen
/// union of the cylinders over the code.
#[derive(Debug, Clone)]
pub struct CodeCylinders(pub FiniteCode);

impl TargetSet for CodeCylinders {
    fn name(&self) -> String {
        format!("code-cylinders(n={}, size={})", self.0.n(), self.0.len())
    }

    fn verdict(&self, prefix: &Word) -> Verdict {
        let n = self.0.n();
        if prefix.len() >= n {
            let head = prefix.prefix(n).expect("long enough");
            return if self.0.contains(&head) {
                Verdict::In
            } else {
                Verdict::Out
            };
        }
        if self.0.members().iter().any(|m| prefix.is_prefix_of(m)) {
            Verdict::Undecided
        } else {
            Verdict::Out
        }
    }
}

/// A target given by an arbitrary closure. Monotonicity is the caller's
/// responsibility and is checked by `evaluate`.
#[derive(Clone)]
pub struct OracleTarget {
    name: String,
    oracle: Arc<dyn Fn(&Word) -> Verdict + Send + Sync>,
}

impl OracleTarget {
    pub fn new(
        name: impl Into<String>,
        oracle: impl Fn(&Word) -> Verdict + Send + Sync + 'static,
    ) -> Self {
        OracleTarget {
            name: name.into(),
            oracle: Arc::new(oracle),
        }
    }
}

impl TargetSet for OracleTarget {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn verdict(&self, prefix: &Word) -> Verdict {
        (self.oracle)(prefix)
    }
}
