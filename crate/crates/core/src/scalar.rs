//! One-point Cu-semigroups: `ℕ̄`, `Cu(Z)` (compact integers plus soft
//! positive rationals), `[0, ∞]`, and a `Cu(Z)`-type semigroup whose
//! compact part carries a `ℤ/2` twist (`2e = 2f`, `e ≠ f`).
//!
//! All four are subsemigroups of one value type, [`Scalar`], with a single
//! order and addition; the [`ScalarKind`] only restricts membership.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CuError;
use crate::ext::{farey_grid, Ext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    /// `{0, 1, 2, …, ∞}`
    NBar,
    /// `ℕ ⊔ (0, ∞]`
    ZCu,
    /// `[0, ∞]`
    ExtRational,
    /// `Cu(Z)` with compact classes `(n, τ)`, `τ ∈ ℤ/2`
    Torsion,
}

impl ScalarKind {
    pub const ALL: [ScalarKind; 4] = [
        ScalarKind::NBar,
        ScalarKind::ZCu,
        ScalarKind::ExtRational,
        ScalarKind::Torsion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScalarKind::NBar => "nbar",
            ScalarKind::ZCu => "zcu",
            ScalarKind::ExtRational => "extrational",
            ScalarKind::Torsion => "torsion",
        }
    }

    pub fn contains(self, v: &Scalar) -> bool {
        match (self, v) {
            (_, Scalar::Compact { rank: 0, twist: true }) => false,
            (ScalarKind::NBar, Scalar::Compact { twist, .. }) => !twist,
            (ScalarKind::NBar, Scalar::Soft(t)) => *t == Ext::Inf,
            (ScalarKind::ZCu, Scalar::Compact { twist, .. }) => !twist,
            (ScalarKind::ExtRational, Scalar::Compact { rank, .. }) => *rank == 0,
            (ScalarKind::Torsion, Scalar::Compact { .. }) => true,
            (_, Scalar::Soft(t)) => !t.is_zero(),
        }
    }

    /// Whether the kind has soft values strictly between compact ones, so a
    /// finite grid cannot contain every element below a bound.
    pub fn is_discrete(self) -> bool {
        matches!(self, ScalarKind::NBar)
    }

    /// Grid values `{0..N, ∞}` plus soft rationals `p/q`, `q ≤ d`, `p/q ≤ N`,
    /// in enumeration order (by rank, compact before soft, untwisted first).
    pub fn grid(self, ceiling: u32, denominator: u32) -> Vec<Scalar> {
        let mut out = Vec::new();
        let compact_max = match self {
            ScalarKind::ExtRational => 0,
            _ => ceiling,
        };
        for n in 0..=compact_max {
            out.push(Scalar::compact(n));
            if self == ScalarKind::Torsion && n > 0 {
                out.push(Scalar::twisted(n));
            }
        }
        if self != ScalarKind::NBar {
            let grid = farey_grid(
                denominator.max(1) as i64,
                Rational64::zero(),
                Rational64::from_integer(ceiling as i64),
            );
            for r in grid.into_iter().filter(|r| !r.is_zero()) {
                out.push(Scalar::Soft(Ext::Fin(r)));
            }
        }
        out.push(Scalar::INF);
        out.sort_by_key(|a| a.enum_key());
        out
    }

    /// Closed form of `sup{x : rank(x) ≤ (1−ε)·r for some ε > 0}`.
    pub fn alpha(self, r: Ext) -> Scalar {
        match r {
            Ext::Inf => Scalar::INF,
            Ext::Fin(q) if q.is_zero() => Scalar::ZERO,
            Ext::Fin(q) => match self {
                ScalarKind::NBar => Scalar::compact(Ext::floor_strict(q).max(0) as u32),
                _ => Scalar::Soft(Ext::Fin(q)),
            },
        }
    }

    /// `n`-th term of a `≪`-increasing sequence with supremum `v`.
    pub fn approximant(self, v: Scalar, n: u32) -> Scalar {
        match v {
            Scalar::Compact { .. } => v,
            Scalar::Soft(Ext::Inf) => match self {
                ScalarKind::ExtRational => Scalar::soft(Ext::int(n as i64 + 1)),
                _ => Scalar::compact(n),
            },
            Scalar::Soft(Ext::Fin(t)) => Scalar::soft(Ext::Fin(t * Rational64::new(n as i64 + 1, n as i64 + 2))),
        }
    }

    /// Interpret a parsed value in this kind (e.g. `3` means `Soft(3)` in `[0, ∞]`).
    pub fn coerce(self, v: Scalar) -> Result<Scalar, CuError> {
        let v = match (self, v) {
            (ScalarKind::ExtRational, Scalar::Compact { rank, twist: false }) => Scalar::soft(Ext::int(rank as i64)),
            _ => v,
        };
        if self.contains(&v) {
            Ok(v)
        } else {
            Err(CuError::InvalidElement(format!(
                "value {v} is not in scalar kind {}",
                self.name()
            )))
        }
    }
}

impl FromStr for ScalarKind {
    type Err = CuError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "nbar" => Ok(ScalarKind::NBar),
            "zcu" => Ok(ScalarKind::ZCu),
            "extrational" | "ext" | "real" => Ok(ScalarKind::ExtRational),
            "torsion" => Ok(ScalarKind::Torsion),
            other => Err(CuError::Parse(format!("unknown scalar kind {other:?}"))),
        }
    }
}

/// A value of a one-point Cu-semigroup.
///
/// `Soft(t)` always has `t > 0`; use [`Scalar::soft`] to normalize.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scalar {
    Compact { rank: u32, twist: bool },
    Soft(Ext),
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::Compact { rank: 0, twist: false };
    pub const INF: Scalar = Scalar::Soft(Ext::Inf);

    pub fn compact(n: u32) -> Scalar {
        Scalar::Compact { rank: n, twist: false }
    }

    pub fn twisted(n: u32) -> Scalar {
        assert!(n > 0, "the zero class carries no twist");
        Scalar::Compact { rank: n, twist: true }
    }

    pub fn soft(t: Ext) -> Scalar {
        if t.is_zero() {
            Scalar::ZERO
        } else {
            Scalar::Soft(t)
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Scalar::ZERO
    }

    pub fn is_finite(&self) -> bool {
        *self != Scalar::INF
    }

    pub fn rank(&self) -> Ext {
        match self {
            Scalar::Compact { rank, .. } => Ext::int(*rank as i64),
            Scalar::Soft(t) => *t,
        }
    }

    pub fn enum_key(&self) -> (Ext, bool, bool) {
        match self {
            Scalar::Compact { twist, .. } => (self.rank(), false, *twist),
            Scalar::Soft(t) => (*t, true, false),
        }
    }

    pub fn le(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Compact { rank: m, twist: a }, Scalar::Compact { rank: n, twist: b }) => {
                m < n || (m == n && a == b)
            }
            (Scalar::Soft(s), Scalar::Soft(t)) => s <= t,
            (Scalar::Soft(s), Scalar::Compact { rank, .. }) => *s <= Ext::int(*rank as i64),
            (Scalar::Compact { rank, .. }, Scalar::Soft(t)) => Ext::int(*rank as i64) < *t,
        }
    }

    pub fn way_below(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Compact { .. }, _) => self.le(other),
            (Scalar::Soft(s), Scalar::Soft(t)) => s < t,
            (Scalar::Soft(s), Scalar::Compact { rank, .. }) => *s <= Ext::int(*rank as i64),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Compact { rank: m, twist: a }, Scalar::Compact { rank: n, twist: b }) => Scalar::Compact {
                rank: m + n,
                twist: a ^ b,
            },
            _ => Scalar::soft(self.rank() + other.rank()),
        }
    }

    pub fn mul(&self, k: u64) -> Scalar {
        if k == 0 {
            return Scalar::ZERO;
        }
        match self {
            Scalar::Compact { rank, twist } => Scalar::Compact {
                rank: rank * k as u32,
                twist: *twist && k % 2 == 1,
            },
            Scalar::Soft(t) => Scalar::Soft(t.scale(Rational64::from_integer(k as i64))),
        }
    }

    /// `∞·self`
    pub fn saturate(&self) -> Scalar {
        if self.is_zero() {
            Scalar::ZERO
        } else {
            Scalar::INF
        }
    }

    /// Greatest lower bound; always exists.
    pub fn meet(&self, other: &Scalar) -> Scalar {
        if self.le(other) {
            *self
        } else if other.le(self) {
            *other
        } else {
            // incomparable compact classes of equal rank
            Scalar::soft(self.rank())
        }
    }

    /// Least upper bound, absent for incomparable compact classes.
    pub fn join(&self, other: &Scalar) -> Option<Scalar> {
        if self.le(other) {
            Some(*other)
        } else if other.le(self) {
            Some(*self)
        } else {
            None
        }
    }

    /// Smallest `n ≥ 0` with `self ≤ n·y`, or `None` when only `∞·y` works
    /// (or nothing does).
    pub fn min_multiple(&self, y: &Scalar) -> Option<u64> {
        if self.is_zero() {
            return Some(0);
        }
        if y.is_zero() {
            return None;
        }
        if *y == Scalar::INF {
            return Some(1);
        }
        if *self == Scalar::INF {
            return None;
        }
        let (Ext::Fin(rx), Ext::Fin(ry)) = (self.rank(), y.rank()) else {
            unreachable!()
        };
        let n0 = (rx / ry).ceil().to_u64().unwrap_or(u64::MAX).max(1);
        (n0.saturating_sub(1).max(1)..=n0 + 2).find(|&n| self.le(&y.mul(n)))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::ZERO
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Compact { rank, twist: false } => write!(f, "{rank}"),
            Scalar::Compact { rank, twist: true } => write!(f, "{rank}t"),
            Scalar::Soft(Ext::Inf) => write!(f, "inf"),
            Scalar::Soft(t) => write!(f, "Soft({t})"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = CuError;

    /// Accepts `3`, `3t`, `inf`, `∞`, `Soft(5/2)`, `s5/2`, and bare
    /// non-integer rationals such as `5/2` (read as soft).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Scalar::INF);
        }
        let soft_body = s
            .strip_prefix("Soft(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix('s'));
        if let Some(body) = soft_body {
            let t: Ext = body.parse()?;
            if t.is_zero() {
                return Err(CuError::Parse("soft values must be positive".into()));
            }
            return Ok(Scalar::Soft(t));
        }
        if let Some(n) = s.strip_suffix('t') {
            let n: u32 = n
                .parse()
                .map_err(|_| CuError::Parse(format!("bad twisted class {s:?}")))?;
            if n == 0 {
                return Err(CuError::Parse("the zero class carries no twist".into()));
            }
            return Ok(Scalar::twisted(n));
        }
        if let Ok(n) = s.parse::<u32>() {
            return Ok(Scalar::compact(n));
        }
        let t: Ext = s.parse()?;
        Ok(Scalar::soft(t))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn nbar_examples() {
        assert!(s("3").le(&Scalar::INF));
        assert_eq!(s("2").add(&Scalar::INF), Scalar::INF);
        assert!(s("3").way_below(&s("5")));
        assert!(!Scalar::INF.way_below(&Scalar::INF));
        assert!(s("4").way_below(&s("4")));
    }

    #[test]
    fn zcu_order_and_addition() {
        assert!(!s("2").le(&s("Soft(2)")));
        assert!(s("Soft(2)").le(&s("2")));
        assert!(s("1").le(&s("Soft(3/2)")));
        assert_eq!(s("1").add(&s("Soft(1/2)")), s("Soft(3/2)"));
        assert_eq!(s("2").meet(&s("Soft(2)")), s("Soft(2)"));
        assert!(!s("Soft(1)").way_below(&s("Soft(1)")));
        assert!(s("Soft(1)").way_below(&s("1")));
    }

    #[test]
    fn torsion_classes() {
        let e = s("1");
        let f = s("1t");
        assert_eq!(e.mul(2), f.mul(2));
        assert_ne!(e, f);
        assert!(!e.le(&f) && !f.le(&e));
        assert_eq!(e.meet(&f), s("Soft(1)"));
        assert_eq!(e.add(&f), s("2t"));
        assert!(f.le(&s("2")));
        assert_eq!(e.join(&f), None);
    }

    #[test]
    fn min_multiple_cases() {
        assert_eq!(s("5").min_multiple(&s("1")), Some(5));
        assert_eq!(Scalar::INF.min_multiple(&s("1")), None);
        assert_eq!(s("1").min_multiple(&Scalar::ZERO), None);
        assert_eq!(s("2").min_multiple(&s("Soft(1)")), Some(3));
        assert_eq!(s("2t").min_multiple(&s("1")), Some(3));
        assert_eq!(s("2t").min_multiple(&s("1t")), Some(3));
        assert_eq!(s("1t").min_multiple(&s("1t")), Some(1));
    }

    #[test]
    fn grids_are_sorted_and_member() {
        for kind in ScalarKind::ALL {
            let g = kind.grid(3, 2);
            assert!(g.iter().all(|v| kind.contains(v)), "{kind:?}");
            assert_eq!(g[0], Scalar::ZERO);
            assert_eq!(*g.last().unwrap(), Scalar::INF);
        }
        assert_eq!(ScalarKind::NBar.grid(4, 8).len(), 6);
    }

    #[test]
    fn alpha_closed_forms() {
        assert_eq!(ScalarKind::NBar.alpha(Ext::ratio(5, 2)), s("2"));
        assert_eq!(ScalarKind::NBar.alpha(Ext::int(3)), s("2"));
        assert_eq!(ScalarKind::NBar.alpha(Ext::Inf), Scalar::INF);
        assert_eq!(ScalarKind::ZCu.alpha(Ext::ratio(5, 2)), s("Soft(5/2)"));
    }
}
