//! Closed intervals over the extended reals.
//!
//! Every imprecise sample and every robustness value in the engine is an
//! [`Interval`]. Endpoints are `f64` with explicit infinities; NaN is never a
//! valid endpoint. The lattice operations ([`Interval::max`],
//! [`Interval::min`]) act endpoint-wise, so the lower and upper bounds of any
//! max/min expression can be computed independently of each other.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `lo <= hi`, endpoints possibly infinite.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// `[-inf, +inf]`: nothing is known about the value.
    pub const UNKNOWN: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    /// `[+inf, +inf]`, the robustness of `true`.
    pub const TOP: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::INFINITY,
    };
    /// `[-inf, -inf]`, the robustness of `false`.
    pub const BOTTOM: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::NEG_INFINITY,
    };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[v, v]`.
    pub fn point(v: f64) -> Self {
        assert!(!v.is_nan(), "NaN is not an interval endpoint");
        Interval { lo: v, hi: v }
    }

    /// Caller guarantees `lo <= hi` and no NaN.
    pub(crate) const fn from_bounds(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_unknown(&self) -> bool {
        *self == Interval::UNKNOWN
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_value(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `c + I`. The shift must be finite.
    pub fn add_scalar(self, c: f64) -> Interval {
        assert!(c.is_finite(), "scalar shift must be finite, got {c}");
        Interval {
            lo: self.lo + c,
            hi: self.hi + c,
        }
    }

    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// Endpoint-wise sum; `inf + -inf` on either endpoint is an error.
    pub fn add(self, other: Interval) -> Result<Interval> {
        Ok(Interval {
            lo: checked_sum(self.lo, other.lo)?,
            hi: checked_sum(self.hi, other.hi)?,
        })
    }

    pub fn sub(self, other: Interval) -> Result<Interval> {
        self.add(other.neg())
    }

    #[inline]
    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    #[inline]
    pub fn min(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// Endpoint-wise maximum of a non-empty collection.
    pub fn max_all<I: IntoIterator<Item = Interval>>(items: I) -> Result<Interval> {
        items
            .into_iter()
            .reduce(Interval::max)
            .ok_or(Error::EmptyAggregate)
    }

    /// Endpoint-wise minimum of a non-empty collection.
    pub fn min_all<I: IntoIterator<Item = Interval>>(items: I) -> Result<Interval> {
        items
            .into_iter()
            .reduce(Interval::min)
            .ok_or(Error::EmptyAggregate)
    }

    /// `self < other`: every value of `self` lies strictly below every value of `other`.
    pub fn lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    /// `self > other`, the mirror of [`Interval::lt`].
    pub fn gt(&self, other: &Interval) -> bool {
        self.lo > other.hi
    }

    /// Interval radius `[min(|lo|,|hi|), max(|lo|,|hi|)]`.
    pub fn radius(&self) -> Interval {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        Interval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    /// Hausdorff distance between two intervals.
    ///
    /// Endpoints that are infinite with the same sign on both sides contribute
    /// zero; a finite endpoint against an infinite one contributes `+inf`.
    pub fn hausdorff(&self, other: &Interval) -> f64 {
        endpoint_distance(self.lo, other.lo).max(endpoint_distance(self.hi, other.hi))
    }

    /// `fine ⊆ self`.
    pub fn refines(&self, fine: &Interval) -> bool {
        self.lo <= fine.lo && fine.hi <= self.hi
    }

    /// `fine ⊂ self`.
    pub fn strictly_refines(&self, fine: &Interval) -> bool {
        self.refines(fine) && self != fine
    }
}

fn checked_sum(a: f64, b: f64) -> Result<f64> {
    let s = a + b;
    if s.is_nan() {
        Err(Error::IndeterminateSum(a, b))
    } else {
        Ok(s)
    }
}

fn endpoint_distance(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::UNKNOWN
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses an endpoint literal; accepts `inf`, `-inf`, `+inf` and plain numbers.
pub fn parse_endpoint(s: &str) -> Option<f64> {
    let s = s.trim();
    let v = match s {
        "inf" | "+inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        _ => s.parse::<f64>().ok()?,
    };
    (!v.is_nan()).then_some(v)
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format {
            source_name: "interval".into(),
            line: 0,
            message: format!("cannot parse `{s}` as [lo,hi]"),
        };
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (lo, hi) = inner.split_once(',').ok_or_else(bad)?;
        let lo = parse_endpoint(lo).ok_or_else(bad)?;
        let hi = parse_endpoint(hi).ok_or_else(bad)?;
        Interval::new(lo, hi)
    }
}
