//! Bit words, finitely presented infinite streams and the Hamming metric.

mod extended;
mod stream;
mod word;

pub use extended::ExtendedNat;
pub use stream::Stream;
pub use word::{bit_k, w, Word};

use crate::error::Result;

/// A point of `Z_2^n` for some `n ∈ N ∪ {ω}` on which the Hamming metric is
/// exactly computable.
pub trait HammingPoint: Clone + std::fmt::Debug {
    fn hd(&self, other: &Self) -> Result<ExtendedNat>;

    /// Disagreement coordinates, or `None` when there are infinitely many.
    fn disagreements(&self, other: &Self) -> Result<Option<Vec<usize>>>;

    /// Forget coordinate `n`.
    fn delete(&self, n: usize) -> Result<Self>;

    fn same_point(&self, other: &Self) -> Result<bool> {
        Ok(self.hd(other)? == ExtendedNat::ZERO)
    }

    fn label(&self) -> String {
        format!("{self:?}")
    }
}

impl HammingPoint for Word {
    fn hd(&self, other: &Word) -> Result<ExtendedNat> {
        Word::hd(self, other)
    }

    fn disagreements(&self, other: &Word) -> Result<Option<Vec<usize>>> {
        Word::disagreements(self, other).map(Some)
    }

    fn delete(&self, n: usize) -> Result<Word> {
        Word::delete(self, n)
    }

    fn same_point(&self, other: &Word) -> Result<bool> {
        Ok(self == other)
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

impl HammingPoint for Stream {
    fn hd(&self, other: &Stream) -> Result<ExtendedNat> {
        Stream::hd(self, other)
    }

    fn disagreements(&self, other: &Stream) -> Result<Option<Vec<usize>>> {
        Stream::disagreements(self, other)
    }

    fn delete(&self, n: usize) -> Result<Stream> {
        Stream::delete(self, n)
    }

    fn same_point(&self, other: &Stream) -> Result<bool> {
        Stream::same_point(self, other)
    }
}
