//! Error-detecting binary codes over finite and infinite words, thin sets,
//! Banach-Mazur games with strategy capture, parity partitions of the cube
//! and exact k-thin partition numbers.

pub mod bitstream;
pub mod capture;
pub mod code;
pub mod error;
pub mod game;
pub mod kthin;
pub mod xorset;

pub use bitstream::{bit_k, ExtendedNat, HammingPoint, Stream, Word};
pub use code::{Code, CodeAnalysis, DecodeResult, ThinReport, Transmission};
pub use error::{Error, Result};

/// A code inside `Z_2^n` for finite `n`.
pub type FiniteCode = Code<Word>;
/// A finite code of closed-form streams inside `Z_2^ω`.
pub type StreamCode = Code<Stream>;
