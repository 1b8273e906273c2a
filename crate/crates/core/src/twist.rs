use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Q;

/// The twist `λ`: either a concrete rational or the symbolic class of a
/// non-integral value, handled as a transcendental over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TwistParameter {
    Rational(Q),
    Generic,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid twist `{input}`: expected an integer, `p/q`, or `generic`")]
pub struct TwistParseError {
    pub input: String,
}

impl TwistParameter {
    pub fn integer(n: i64) -> Self {
        TwistParameter::Rational(Q::from_integer(BigInt::from(n)))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        TwistParameter::Rational(Q::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, TwistParameter::Generic)
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            TwistParameter::Rational(q) => Some(q),
            TwistParameter::Generic => None,
        }
    }

    /// The integer value, if `λ` is an integer. Always `None` for the
    /// symbolic class.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            TwistParameter::Rational(q) if q.is_integer() => Some(q.to_integer()),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| i64::try_from(n).ok())
    }

    pub fn is_integral(&self) -> bool {
        self.as_integer().is_some()
    }
}

impl fmt::Display for TwistParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistParameter::Rational(q) => write!(f, "{q}"),
            TwistParameter::Generic => write!(f, "generic"),
        }
    }
}

impl FromStr for TwistParameter {
    type Err = TwistParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TwistParseError {
            input: s.to_string(),
        };
        let t = s.trim();
        if t.eq_ignore_ascii_case("generic") {
            return Ok(TwistParameter::Generic);
        }
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(TwistParameter::Rational(Q::new(num, den)))
    }
}

impl Serialize for TwistParameter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `a - b*m` lies in `m·Z` test for rationals: whether `(a - b) / m` is an
/// integer.
pub(crate) fn congruent_mod(a: &Q, b: &Q, modulus: u64) -> bool {
    let diff = (a - b) / Q::from_integer(BigInt::from(modulus));
    diff.denom().is_one()
}
