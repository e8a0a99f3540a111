//! Exact nonnegative rationals for similarity values and thresholds.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A nonnegative rational number kept in lowest terms.
///
/// All accept/reject decisions against a threshold go through this type (or
/// through [`Rational::cmp_ratio`]) so no floating point ever decides whether
/// a factor pair is a violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::InvalidRational(format!("{num}/0")));
        }
        let g = num.gcd(&den);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    /// `lcs / ell` for a factor pair; `ell` must be positive.
    pub(crate) fn ratio(lcs: usize, ell: usize) -> Self {
        debug_assert!(ell > 0);
        Rational::new(lcs as u64, ell as u64).expect("positive factor length")
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Compares `num / den` against `self` exactly.
    pub fn cmp_ratio(&self, num: u64, den: u64) -> Ordering {
        (num as u128 * self.den as u128).cmp(&(self.num as u128 * den as u128))
    }

    /// `ceil(self * m)`.
    pub fn ceil_mul(&self, m: u64) -> u64 {
        let prod = self.num as u128 * m as u128;
        prod.div_ceil(self.den as u128) as u64
    }

    /// True when `0 < self < 1`.
    pub fn is_proper_fraction(&self) -> bool {
        self.num > 0 && self.num < self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `p/q`, a plain integer, or a decimal such as `0.888`; decimals
/// are converted exactly (`0.888` is `111/125`).
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::InvalidRational(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Rational::new(p, q).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let den = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad())?;
            let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
            return Rational::new(num, den);
        }
        let n: u64 = s.parse().map_err(|_| bad())?;
        Rational::new(n, 1)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
