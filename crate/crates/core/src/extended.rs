//! Reals extended by a single point at negative infinity.
//!
//! Potentials with logarithmic poles take values in `ℝ ∪ {−∞}`. Keeping the
//! pole as its own variant (instead of relying on `f64::NEG_INFINITY`) makes
//! every place that can produce or swallow a pole explicit.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    NegInfinity,
}

impl ExtendedReal {
    pub const NEG_INFINITY: ExtendedReal = ExtendedReal::NegInfinity;
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    /// Maps `f64::NEG_INFINITY` to the pole; any other value is kept as finite.
    pub fn from_f64(v: f64) -> Self {
        if v == f64::NEG_INFINITY {
            ExtendedReal::NegInfinity
        } else {
            ExtendedReal::Finite(v)
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, ExtendedReal::NegInfinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::NegInfinity => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::NegInfinity => f64::NEG_INFINITY,
        }
    }

    /// `exp`, with `exp(−∞) = 0`.
    pub fn exp(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v.exp(),
            ExtendedReal::NegInfinity => 0.0,
        }
    }

    /// Multiplication by a nonnegative finite scalar. `0 · (−∞)` is taken to be `−∞`
    /// only when the scalar is strictly positive; a zero scalar yields zero.
    pub fn scale(self, s: f64) -> Self {
        debug_assert!(s >= 0.0, "scale factor must be nonnegative");
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v * s),
            ExtendedReal::NegInfinity if s > 0.0 => ExtendedReal::NegInfinity,
            ExtendedReal::NegInfinity => ExtendedReal::ZERO,
        }
    }
}

impl Default for ExtendedReal {
    fn default() -> Self {
        ExtendedReal::ZERO
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        ExtendedReal::from_f64(v)
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::NegInfinity,
        }
    }
}

impl Add<f64> for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: f64) -> ExtendedReal {
        self + ExtendedReal::Finite(rhs)
    }
}

impl AddAssign for ExtendedReal {
    fn add_assign(&mut self, rhs: ExtendedReal) {
        *self = *self + rhs;
    }
}

impl Mul<f64> for ExtendedReal {
    type Output = ExtendedReal;

    fn mul(self, rhs: f64) -> ExtendedReal {
        self.scale(rhs)
    }
}

impl Sum for ExtendedReal {
    fn sum<I: Iterator<Item = ExtendedReal>>(iter: I) -> Self {
        iter.fold(ExtendedReal::ZERO, |acc, v| acc + v)
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtendedReal::NegInfinity, ExtendedReal::NegInfinity) => Some(Ordering::Equal),
            (ExtendedReal::NegInfinity, _) => Some(Ordering::Less),
            (_, ExtendedReal::NegInfinity) => Some(Ordering::Greater),
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => fmt::Display::fmt(v, f),
            ExtendedReal::NegInfinity => f.write_str("-inf"),
        }
    }
}

// JSON has no infinities: the pole is written as the string "-inf".
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => serializer.serialize_f64(*v),
            ExtendedReal::NegInfinity => serializer.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) => Ok(ExtendedReal::Finite(v)),
            Repr::Str(s) if s == "-inf" => Ok(ExtendedReal::NegInfinity),
            Repr::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"-inf\", got {s:?}"
            ))),
        }
    }
}
