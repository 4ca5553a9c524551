//! Nonnegative extended rationals `[0, ∞]` with exact arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CuError;

/// A value in `[0, ∞]`. Finite values are exact rationals.
///
/// Multiplication follows the `0·∞ = 0` convention.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ext {
    Fin(Rational64),
    Inf,
}

impl Ext {
    pub const ZERO: Ext = Ext::Fin(Rational64::new_raw(0, 1));
    pub const ONE: Ext = Ext::Fin(Rational64::new_raw(1, 1));

    pub fn int(n: i64) -> Ext {
        assert!(n >= 0, "extended rationals are nonnegative");
        Ext::Fin(Rational64::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Ext {
        let r = Rational64::new(num, den);
        assert!(!r.is_negative(), "extended rationals are nonnegative");
        Ext::Fin(r)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Fin(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Fin(_))
    }

    pub fn finite(&self) -> Option<Rational64> {
        match self {
            Ext::Fin(r) => Some(*r),
            Ext::Inf => None,
        }
    }

    /// Multiplication by a nonnegative rational scalar, with `0·∞ = 0`.
    pub fn scale(self, c: Rational64) -> Ext {
        debug_assert!(!c.is_negative());
        match self {
            Ext::Fin(r) => Ext::Fin(r * c),
            Ext::Inf if c.is_zero() => Ext::ZERO,
            Ext::Inf => Ext::Inf,
        }
    }

    /// `∞·self`: zero stays zero, everything else saturates.
    pub fn saturate(self) -> Ext {
        if self.is_zero() {
            Ext::ZERO
        } else {
            Ext::Inf
        }
    }

    /// Truncated difference `self − other` (∞ − finite = ∞, anything − ∞ = 0).
    pub fn monus(self, other: Ext) -> Ext {
        match (self, other) {
            (_, Ext::Inf) => Ext::ZERO,
            (Ext::Inf, _) => Ext::Inf,
            (Ext::Fin(a), Ext::Fin(b)) => {
                if a > b {
                    Ext::Fin(a - b)
                } else {
                    Ext::ZERO
                }
            }
        }
    }

    /// Largest integer strictly below a positive finite value.
    pub fn floor_strict(r: Rational64) -> i64 {
        let f = r.floor();
        if f == r {
            f.to_integer() - 1
        } else {
            f.to_integer()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Ext::Fin(r) => r.to_f64().unwrap_or(f64::NAN),
            Ext::Inf => f64::INFINITY,
        }
    }
}

impl Default for Ext {
    fn default() -> Self {
        Ext::ZERO
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        match (self, rhs) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }
}

impl Mul for Ext {
    type Output = Ext;
    fn mul(self, rhs: Ext) -> Ext {
        match (self, rhs) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a * b),
            (a, b) if a.is_zero() || b.is_zero() => Ext::ZERO,
            _ => Ext::Inf,
        }
    }
}

impl std::iter::Sum for Ext {
    fn sum<I: Iterator<Item = Ext>>(iter: I) -> Ext {
        iter.fold(Ext::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Inf => write!(f, "inf"),
            Ext::Fin(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Ext::Fin(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Ext {
    type Err = CuError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Ext::Inf);
        }
        let bad = || CuError::Parse(format!("not a nonnegative rational: {s:?}"));
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Rational64::new(n, d)
            }
            None => Rational64::from_integer(s.parse().map_err(|_| bad())?),
        };
        if r.is_negative() {
            return Err(bad());
        }
        Ok(Ext::Fin(r))
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Compare `a` against `c·b` without forming `0·∞` ambiguities.
pub fn cmp_scaled(a: Ext, c: Rational64, b: Ext) -> Ordering {
    a.cmp(&b.scale(c))
}

/// All rationals `p/q` with `q ≤ max_den` in `[lo, hi]`, sorted and deduplicated.
pub fn farey_grid(max_den: i64, lo: Rational64, hi: Rational64) -> Vec<Rational64> {
    let mut out = Vec::new();
    for q in 1..=max_den.max(1) {
        let start = (lo * Rational64::from_integer(q)).ceil().to_integer();
        let end = (hi * Rational64::from_integer(q)).floor().to_integer();
        for p in start..=end {
            out.push(Rational64::new(p, q));
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(Ext::ZERO * Ext::Inf, Ext::ZERO);
        assert_eq!(Ext::Inf.scale(Rational64::zero()), Ext::ZERO);
        assert_eq!(Ext::int(2) * Ext::Inf, Ext::Inf);
    }

    #[test]
    fn parse_and_display() {
        for s in ["0", "3", "5/2", "inf"] {
            let e: Ext = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert!("-1".parse::<Ext>().is_err());
        assert!("1/0".parse::<Ext>().is_err());
        assert_eq!("4/2".parse::<Ext>().unwrap(), Ext::int(2));
    }

    #[test]
    fn floor_strict_excludes_integers() {
        assert_eq!(Ext::floor_strict(Rational64::new(5, 2)), 2);
        assert_eq!(Ext::floor_strict(Rational64::from_integer(3)), 2);
    }

    #[test]
    fn farey_grid_counts() {
        let g = farey_grid(3, Rational64::zero(), Rational64::one());
        // 0, 1/3, 1/2, 2/3, 1
        assert_eq!(g.len(), 5);
    }
}
