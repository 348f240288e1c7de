//! Extended nonnegative rationals: the value semiring `[0, ∞]` every distance lives in.
//!
//! Addition absorbs `∞`. Truncated subtraction follows the conventions
//! `∞ - ∞ = 0`, `a - ∞ = -∞` and `∞ - a = ∞`, which makes [`ExtNN::hom`]
//! right adjoint to addition:
//!
//! ```text
//! a + b >= c   <=>   a >= hom(b, c)
//! ```

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An element of `[0, ∞]`, stored exactly.
///
/// The derived order places every finite value below [`ExtNN::Infinite`],
/// and orders finite values as rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNN {
    Finite(BigRational),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseExtNNError {
    #[error("empty value")]
    Empty,
    #[error("malformed value `{0}`")]
    Malformed(String),
    #[error("negative value `{0}`")]
    Negative(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl ExtNN {
    pub fn zero() -> Self {
        ExtNN::Finite(BigRational::zero())
    }

    pub fn inf() -> Self {
        ExtNN::Infinite
    }

    pub fn from_int(n: u64) -> Self {
        ExtNN::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`, reduced. Panics if `den == 0`.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        ExtNN::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Wraps a rational, rejecting negative values.
    pub fn from_rational(r: BigRational) -> Option<Self> {
        if r.is_negative() {
            None
        } else {
            Some(ExtNN::Finite(r))
        }
    }

    /// `2^{-k}`.
    pub fn pow2_neg(k: u32) -> Self {
        ExtNN::Finite(BigRational::new(
            BigInt::one(),
            BigInt::one() << (k as usize),
        ))
    }

    /// `2^{1-k}`, the distance from the `k`-th point of the dyadic sequence to its limit.
    pub fn dyadic_tail(k: u32) -> Self {
        if k == 0 {
            ExtNN::from_int(2)
        } else {
            ExtNN::pow2_neg(k - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNN::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNN::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtNN::Infinite)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExtNN::Finite(r) => Some(r),
            ExtNN::Infinite => None,
        }
    }

    /// Sum with `∞` absorbing.
    pub fn add(&self, other: &ExtNN) -> ExtNN {
        match (self, other) {
            (ExtNN::Finite(a), ExtNN::Finite(b)) => ExtNN::Finite(a + b),
            _ => ExtNN::Infinite,
        }
    }

    /// Internal hom `[a, b] = max(b - a, 0)`.
    pub fn hom(a: &ExtNN, b: &ExtNN) -> ExtNN {
        match (a, b) {
            (ExtNN::Finite(x), ExtNN::Finite(y)) => {
                if y > x {
                    ExtNN::Finite(y - x)
                } else {
                    ExtNN::zero()
                }
            }
            // ∞ - a = ∞ for finite a.
            (ExtNN::Finite(_), ExtNN::Infinite) => ExtNN::Infinite,
            // a - ∞ = -∞ truncates to 0, and ∞ - ∞ = 0.
            (ExtNN::Infinite, _) => ExtNN::zero(),
        }
    }

    /// `max(hom(a, b), hom(b, a))`, i.e. `|a - b|` with `|∞ - ∞| = 0`.
    pub fn absdiff(a: &ExtNN, b: &ExtNN) -> ExtNN {
        std::cmp::max(ExtNN::hom(a, b), ExtNN::hom(b, a))
    }
}

impl Default for ExtNN {
    fn default() -> Self {
        ExtNN::zero()
    }
}

impl Add for ExtNN {
    type Output = ExtNN;

    fn add(self, rhs: ExtNN) -> ExtNN {
        ExtNN::add(&self, &rhs)
    }
}

impl<'a> Add<&'a ExtNN> for &'a ExtNN {
    type Output = ExtNN;

    fn add(self, rhs: &'a ExtNN) -> ExtNN {
        ExtNN::add(self, rhs)
    }
}

impl From<u64> for ExtNN {
    fn from(n: u64) -> Self {
        ExtNN::from_int(n)
    }
}

impl fmt::Display for ExtNN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNN::Infinite => f.write_str("inf"),
            ExtNN::Finite(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            ExtNN::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt, ParseExtNNError> {
    let t = s.trim();
    if t.starts_with('-') {
        return Err(ParseExtNNError::Negative(whole.to_string()));
    }
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseExtNNError::Malformed(whole.to_string()));
    }
    t.parse::<BigInt>()
        .map_err(|_| ParseExtNNError::Malformed(whole.to_string()))
}

impl FromStr for ExtNN {
    type Err = ParseExtNNError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseExtNNError::Empty);
        }
        if t == "inf" {
            return Ok(ExtNN::Infinite);
        }
        match t.split_once('/') {
            None => Ok(ExtNN::Finite(BigRational::from_integer(parse_int(t, s)?))),
            Some((n, d)) => {
                let num = parse_int(n, s)?;
                let den = parse_int(d, s)?;
                if den.is_zero() {
                    return Err(ParseExtNNError::ZeroDenominator(s.to_string()));
                }
                Ok(ExtNN::Finite(BigRational::new(num, den)))
            }
        }
    }
}

impl Serialize for ExtNN {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtNN {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sup over a finite family; the empty sup is `0`.
pub fn sup<'a, I: IntoIterator<Item = &'a ExtNN>>(values: I) -> ExtNN {
    values
        .into_iter()
        .max()
        .cloned()
        .unwrap_or_else(ExtNN::zero)
}

/// Inf over a finite family; the empty inf is `∞`.
pub fn inf<'a, I: IntoIterator<Item = &'a ExtNN>>(values: I) -> ExtNN {
    values
        .into_iter()
        .min()
        .cloned()
        .unwrap_or(ExtNN::Infinite)
}
