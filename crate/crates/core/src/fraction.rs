//! Exact non-negative rationals for mining thresholds.
//!
//! Observed metrics are ratios of integer counts. Comparing them against
//! thresholds in floating point misclassifies boundary cases: a support of
//! exactly 1/5 sits below the `f64` nearest to 0.20, so an inclusive
//! `>= 0.20` check would wrongly drop it. Thresholds are therefore kept as
//! reduced fractions and every comparison cross-multiplies in 128-bit
//! integers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A non-negative rational number in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    /// Builds `num/den` in lowest terms. `den` must be non-zero.
    pub fn new(num: u64, den: u64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::InvalidFraction(format!("{num}/0")));
        }
        let g = gcd(num, den);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True when `self` lies in the half-open interval (0, 1].
    pub fn in_unit_interval(&self) -> bool {
        self.num > 0 && self.num <= self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact test for `self <= a/b`. A zero `b` makes `a/b` undefined and
    /// yields `false` unless `a` is also zero (the 0/0 ratio never appears
    /// in mining because a zero-support antecedent fails the support gate
    /// first).
    pub fn le_ratio(&self, a: u64, b: u64) -> bool {
        (self.num as u128) * (b as u128) <= (a as u128) * (self.den as u128)
    }

    /// Exact test for `self < a/b` with 128-bit operands, used for lift
    /// ratios whose numerator and denominator are products of counts.
    pub fn lt_ratio_wide(&self, a: u128, b: u128) -> bool {
        (self.num as u128) * b < a * (self.den as u128)
    }
}

/// Orders two count ratios `a_num/a_den` and `b_num/b_den` exactly.
/// Denominators must be non-zero.
pub(crate) fn cmp_ratios(a_num: u128, a_den: u128, b_num: u128, b_den: u128) -> Ordering {
    debug_assert!(a_den != 0 && b_den != 0);
    (a_num * b_den).cmp(&(b_num * a_den))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_ratios(
            self.num as u128,
            self.den as u128,
            other.num as u128,
            other.den as u128,
        )
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Parses a plain decimal such as `0.25`, `.5`, or `1`. Signs,
    /// exponents, and more than nine fractional digits are rejected so the
    /// value always fits a `u64` denominator exactly.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidFraction(s.to_string());
        let t = s.trim();
        let (int_part, frac_part) = match t.split_once('.') {
            Some((i, f)) => (i, f),
            None => (t, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
            || frac_part.len() > 9
        {
            return Err(bad());
        }
        let int: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac_part.len() as u32);
        let frac: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        Fraction::new(num, den)
    }
}

impl fmt::Display for Fraction {
    /// Prints the exact decimal expansion when the denominator divides a
    /// power of ten, and `num/den` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (mut den, mut twos, mut fives) = (self.den, 0u32, 0u32);
        while den % 2 == 0 {
            den /= 2;
            twos += 1;
        }
        while den % 5 == 0 {
            den /= 5;
            fives += 1;
        }
        if den != 1 {
            return write!(f, "{}/{}", self.num, self.den);
        }
        let digits = twos.max(fives);
        if digits == 0 {
            return write!(f, "{}", self.num);
        }
        let scale = 10u128.pow(digits);
        let scaled = self.num as u128 * scale / self.den as u128;
        let int = scaled / scale;
        let frac = scaled % scale;
        let frac_str = format!("{frac:0width$}", width = digits as usize);
        write!(f, "{int}.{}", frac_str.trim_end_matches('0'))
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}
