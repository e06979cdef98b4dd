use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{bit_k, ExtendedNat, Word};
use crate::error::{Error, Result};

type Oracle = Arc<dyn Fn(usize) -> bool + Send + Sync>;

/// A finitely presented element of the Cantor cube `Z_2^ω`.
///
/// Streams are never materialized. Closed forms (eventually constant and
/// eventually periodic) support exact distance queries; generated streams
/// only answer prefix queries up to their declared horizon.
#[derive(Clone)]
pub enum Stream {
    /// `prefix` followed by `tail` forever.
    Constant { prefix: Word, tail: bool },
    /// `prefix` followed by `period` repeated forever. `period` is nonempty.
    Periodic { prefix: Word, period: Word },
    /// Bits computed on demand, defined for indices below `horizon`.
    Generated { oracle: Oracle, horizon: usize },
}

impl Stream {
    pub fn constant(prefix: Word, tail: bool) -> Stream {
        Stream::Constant { prefix, tail }
    }

    pub fn zeros() -> Stream {
        Stream::constant(Word::empty(), false)
    }

    pub fn periodic(prefix: Word, period: Word) -> Result<Stream> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(Stream::Periodic { prefix, period })
    }

    pub fn generated(
        horizon: usize,
        oracle: impl Fn(usize) -> bool + Send + Sync + 'static,
    ) -> Stream {
        Stream::Generated {
            oracle: Arc::new(oracle),
            horizon,
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self, Stream::Generated { .. })
    }

    /// The last index + 1 that can be evaluated, or `None` when unbounded.
    pub fn horizon(&self) -> Option<usize> {
        match self {
            Stream::Generated { horizon, .. } => Some(*horizon),
            _ => None,
        }
    }

    pub fn bit(&self, i: usize) -> Result<bool> {
        match self {
            Stream::Constant { prefix, tail } => Ok(prefix.get(i).unwrap_or(*tail)),
            Stream::Periodic { prefix, period } => Ok(match prefix.get(i) {
                Some(b) => b,
                None => period.bits()[(i - prefix.len()) % period.len()],
            }),
            Stream::Generated { oracle, horizon } => {
                if i >= *horizon {
                    return Err(Error::HorizonExceeded {
                        index: i,
                        horizon: *horizon,
                    });
                }
                Ok(oracle(i))
            }
        }
    }

    /// The first `len` bits.
    pub fn prefix(&self, len: usize) -> Result<Word> {
        if let Some(h) = self.horizon() {
            if len > h {
                return Err(Error::HorizonExceeded {
                    index: len,
                    horizon: h,
                });
            }
        }
        (0..len)
            .map(|i| self.bit(i))
            .collect::<Result<Vec<_>>>()
            .map(Word::new)
    }

    /// Normal form `(prefix, period)` for closed-form streams.
    fn closed_form(&self, op: &'static str) -> Result<(&Word, PeriodRef<'_>)> {
        match self {
            Stream::Constant { prefix, .. } => Ok((prefix, PeriodRef::Constant)),
            Stream::Periodic { prefix, period } => Ok((prefix, PeriodRef::Word(period))),
            Stream::Generated { .. } => Err(Error::NotClosedForm { op }),
        }
    }

    /// Rewrite the explicit prefix of a closed form so it has at least `len`
    /// bits, then apply `edit` to it. Generated streams get a wrapped oracle.
    fn edit_prefix(
        &self,
        len: usize,
        edit: impl Fn(&mut Vec<bool>) + Send + Sync + 'static,
    ) -> Result<Stream> {
        match self {
            Stream::Constant { tail, .. } => {
                let mut bits = self.prefix(len.max(self.explicit_len()))?.into_bits();
                edit(&mut bits);
                Ok(Stream::constant(Word::new(bits), *tail))
            }
            Stream::Periodic { prefix, period } => {
                // Extend by whole periods so the tail phase is preserved.
                let mut plen = prefix.len();
                while plen < len {
                    plen += period.len();
                }
                let mut bits = self.prefix(plen)?.into_bits();
                edit(&mut bits);
                Ok(Stream::Periodic {
                    prefix: Word::new(bits),
                    period: period.clone(),
                })
            }
            Stream::Generated { oracle, horizon } => {
                if len > *horizon {
                    return Err(Error::HorizonExceeded {
                        index: len.saturating_sub(1),
                        horizon: *horizon,
                    });
                }
                let mut head: Vec<bool> = (0..len).map(|i| oracle(i)).collect();
                edit(&mut head);
                let inner = oracle.clone();
                Ok(Stream::generated(*horizon, move |i| match head.get(i) {
                    Some(&b) => b,
                    None => inner(i),
                }))
            }
        }
    }

    fn explicit_len(&self) -> usize {
        match self {
            Stream::Constant { prefix, .. } | Stream::Periodic { prefix, .. } => prefix.len(),
            Stream::Generated { .. } => 0,
        }
    }

    /// `x^{#n}`: the stream with bit `n` inverted.
    pub fn flip(&self, n: usize) -> Result<Stream> {
        self.edit_prefix(n + 1, move |bits| bits[n] = !bits[n])
    }

    pub fn flip_all(&self, positions: &[usize]) -> Result<Stream> {
        positions.iter().try_fold(self.clone(), |s, &n| s.flip(n))
    }

    /// `Θ(x, m)`: xor bit `k` with `bit_k(m)` for every `k`.
    pub fn theta(&self, m: u64) -> Result<Stream> {
        let width = (u64::BITS - m.leading_zeros()) as usize;
        self.edit_prefix(width, move |bits| {
            for (k, b) in bits.iter_mut().enumerate().take(width) {
                *b ^= bit_k(k as u32, m);
            }
        })
    }

    /// The stream with coordinate `n` removed (projection forgetting `n`).
    pub fn delete(&self, n: usize) -> Result<Stream> {
        match self {
            Stream::Generated { oracle, horizon } => {
                if n >= *horizon {
                    return Err(Error::HorizonExceeded {
                        index: n,
                        horizon: *horizon,
                    });
                }
                let inner = oracle.clone();
                Ok(Stream::generated(horizon - 1, move |i| {
                    inner(if i < n { i } else { i + 1 })
                }))
            }
            _ => {
                // Materialize through n, then drop it. For periodic forms the
                // explicit prefix shrinks by one, keeping the tail aligned.
                let widened = self.edit_prefix(n + 1, |_| {})?;
                Ok(match widened {
                    Stream::Constant { prefix, tail } => Stream::constant(prefix.delete(n)?, tail),
                    Stream::Periodic { prefix, period } => Stream::Periodic {
                        prefix: prefix.delete(n)?,
                        period,
                    },
                    Stream::Generated { .. } => unreachable!(),
                })
            }
        }
    }

    /// Disagreement coordinates of two closed-form streams, or `None` when
    /// there are infinitely many.
    pub fn disagreements(&self, other: &Stream) -> Result<Option<Vec<usize>>> {
        let (pa, ta) = self.closed_form("hd")?;
        let (pb, tb) = other.closed_form("hd")?;
        // Past `start` both streams are periodic with periods dividing `span`,
        // so one aligned window decides whether disagreements recur forever.
        let start = pa.len().max(pb.len());
        let span = lcm(ta.len(), tb.len());
        for i in start..start + span {
            if self.bit(i)? != other.bit(i)? {
                return Ok(None);
            }
        }
        let mut out = Vec::new();
        for i in 0..start {
            if self.bit(i)? != other.bit(i)? {
                out.push(i);
            }
        }
        Ok(Some(out))
    }

    /// Exact Hamming distance of two closed-form streams.
    pub fn hd(&self, other: &Stream) -> Result<ExtendedNat> {
        Ok(match self.disagreements(other)? {
            Some(d) => ExtendedNat::from(d.len()),
            None => ExtendedNat::Omega,
        })
    }

    /// Number of disagreements among indices `0..len`. Works for every
    /// representation as long as `len` is within both horizons.
    pub fn hd_prefix(&self, other: &Stream, len: usize) -> Result<usize> {
        let a = self.prefix(len)?;
        let b = other.prefix(len)?;
        a.distance(&b)
    }

    /// `x ~ y`: finite Hamming distance.
    pub fn sim_related(&self, other: &Stream) -> Result<bool> {
        Ok(self.hd(other)?.is_finite())
    }

    /// `x ≈ y`: finite and even Hamming distance.
    pub fn approx_related(&self, other: &Stream) -> Result<bool> {
        Ok(matches!(self.hd(other)?, ExtendedNat::Finite(d) if d % 2 == 0))
    }

    /// Equality of closed forms as points of the cube.
    pub fn same_point(&self, other: &Stream) -> Result<bool> {
        Ok(self.hd(other)? == ExtendedNat::ZERO)
    }
}

enum PeriodRef<'a> {
    Constant,
    Word(&'a Word),
}

impl PeriodRef<'_> {
    fn len(&self) -> usize {
        match self {
            PeriodRef::Constant => 1,
            PeriodRef::Word(w) => w.len(),
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Debug for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stream::Constant { prefix, tail } => write!(f, "{prefix}({})^ω", *tail as u8),
            Stream::Periodic { prefix, period } => write!(f, "{prefix}({period})^ω"),
            Stream::Generated { horizon, .. } => write!(f, "Generated(horizon={horizon})"),
        }
    }
}

impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum StreamRepr {
    Constant { prefix: Word, tail: Word },
    Periodic { prefix: Word, period: Word },
}

impl Serialize for Stream {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Stream::Constant { prefix, tail } => StreamRepr::Constant {
                prefix: prefix.clone(),
                tail: Word::repeat(*tail, 1),
            },
            Stream::Periodic { prefix, period } => StreamRepr::Periodic {
                prefix: prefix.clone(),
                period: period.clone(),
            },
            Stream::Generated { .. } => {
                return Err(serde::ser::Error::custom(
                    "generated streams have no serial form",
                ))
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Stream {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match StreamRepr::deserialize(d)? {
            StreamRepr::Constant { prefix, tail } => match tail.bits() {
                [b] => Ok(Stream::constant(prefix, *b)),
                _ => Err(D::Error::custom("tail must be \"0\" or \"1\"")),
            },
            StreamRepr::Periodic { prefix, period } => {
                Stream::periodic(prefix, period).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstream::w;

    fn ec(prefix: &str, tail: bool) -> Stream {
        Stream::constant(w(prefix), tail)
    }

    fn ep(prefix: &str, period: &str) -> Stream {
        Stream::periodic(w(prefix), w(period)).unwrap()
    }

    #[test]
    fn hd_on_constant_forms() {
        assert_eq!(
            ec("", false).hd(&ec("1", false)).unwrap(),
            ExtendedNat::Finite(1)
        );
        assert_eq!(ec("", false).hd(&ec("", true)).unwrap(), ExtendedNat::Omega);
        assert_eq!(
            ec("0110", false).hd(&ec("1", false)).unwrap(),
            ExtendedNat::Finite(3)
        );
    }

    #[test]
    fn hd_on_periodic_and_mixed_forms() {
        assert_eq!(ec("", false).hd(&ep("", "01")).unwrap(), ExtendedNat::Omega);
        assert_eq!(ep("", "01").hd(&ep("", "0101")).unwrap(), ExtendedNat::ZERO);
        assert_eq!(
            ep("0", "01").hd(&ep("", "10")).unwrap(),
            ExtendedNat::Finite(1)
        );
        // Periods of coprime length that agree as streams.
        assert_eq!(ep("", "11").hd(&ep("", "111")).unwrap(), ExtendedNat::ZERO);
        assert_eq!(ep("", "110").hd(&ep("", "11")).unwrap(), ExtendedNat::Omega);
    }

    #[test]
    fn generated_streams_are_not_closed_form() {
        let g = Stream::generated(10, |i| i % 3 == 0);
        assert_eq!(g.hd(&ec("", false)), Err(Error::NotClosedForm { op: "hd" }));
        assert!(g.sim_related(&g).is_err());
        assert_eq!(g.prefix(4).unwrap(), w("1001"));
        assert_eq!(
            g.bit(10),
            Err(Error::HorizonExceeded {
                index: 10,
                horizon: 10
            })
        );
    }

    #[test]
    fn hd_prefix_examples() {
        let x = ep("", "011");
        assert_eq!(x.hd_prefix(&x, 50).unwrap(), 0);
        let y = x.flip(2).unwrap();
        assert_eq!(x.hd_prefix(&y, 2).unwrap(), 0);
        assert_eq!(x.hd_prefix(&y, 3).unwrap(), 1);
        assert_eq!(x.hd_prefix(&x.theta(5).unwrap(), 8).unwrap(), 2);
        let g = Stream::generated(5, |_| true);
        assert!(g.hd_prefix(&x, 6).is_err());
        assert_eq!(g.hd_prefix(&x, 5).unwrap(), 2);
    }

    #[test]
    fn relations() {
        let x = ep("10", "011");
        assert!(x.sim_related(&x).unwrap() && x.approx_related(&x).unwrap());
        let one = x.flip(3).unwrap();
        assert!(one.sim_related(&x).unwrap());
        assert!(!one.approx_related(&x).unwrap());
        let two = x.flip(1).unwrap().flip(4).unwrap();
        assert!(two.sim_related(&x).unwrap() && two.approx_related(&x).unwrap());
        assert!(!x.sim_related(&ec("", false)).unwrap());
    }

    #[test]
    fn flip_deep_into_periodic_tail_keeps_phase() {
        let x = ep("1", "011");
        let y = x.flip(20).unwrap();
        assert_eq!(x.hd(&y).unwrap(), ExtendedNat::Finite(1));
        for i in 0..60 {
            assert_eq!(x.bit(i).unwrap() != y.bit(i).unwrap(), i == 20);
        }
        assert_eq!(y.flip(20).unwrap().hd(&x).unwrap(), ExtendedNat::ZERO);
    }

    #[test]
    fn theta_and_flip_on_generated() {
        let g = Stream::generated(12, |i| i % 2 == 0);
        let t = g.theta(6).unwrap();
        assert_eq!(t.prefix(5).unwrap(), w("11001"));
        assert!(g.flip(11).unwrap().bit(11).unwrap());
        assert!(g.flip(12).is_err());
    }

    #[test]
    fn delete_coordinate() {
        let x = ep("10", "011");
        let d = x.delete(3).unwrap();
        let expected: Vec<bool> = (0..40)
            .filter(|&i| i != 3)
            .map(|i| x.bit(i).unwrap())
            .collect();
        assert_eq!(d.prefix(39).unwrap().into_bits(), expected);
        let g = Stream::generated(6, |i| i == 2).delete(1).unwrap();
        assert_eq!(g.prefix(5).unwrap(), w("01000"));
    }

    #[test]
    fn json_forms() {
        let s = serde_json::to_string(&ec("01", true)).unwrap();
        assert_eq!(s, r#"{"kind":"constant","prefix":"01","tail":"1"}"#);
        let p: Stream =
            serde_json::from_str(r#"{"kind":"periodic","prefix":"","period":"01"}"#).unwrap();
        assert_eq!(p.hd(&ep("", "01")).unwrap(), ExtendedNat::ZERO);
        assert!(
            serde_json::from_str::<Stream>(r#"{"kind":"periodic","prefix":"","period":""}"#)
                .is_err()
        );
        assert!(serde_json::to_string(&Stream::generated(3, |_| true)).is_err());
    }

    #[test]
    fn empty_period_rejected() {
        assert_eq!(
            Stream::periodic(w("1"), Word::empty()).err(),
            Some(Error::EmptyPeriod)
        );
    }
}
