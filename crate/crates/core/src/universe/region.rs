use std::fmt;

use crate::exact::{log2_ceil_inv, Rational, Surd};

/// An interval of [0,1] with exact endpoints and per-end openness.
#[derive(Clone, PartialEq, Eq)]
pub struct Region {
    pub lo: Surd,
    pub lo_open: bool,
    pub hi: Surd,
    pub hi_open: bool,
}

impl Region {
    /// Builds the region and clips it to [0,1].
    pub fn new(lo: Surd, lo_open: bool, hi: Surd, hi_open: bool) -> Region {
        let (lo, lo_open) = if lo.is_negative() {
            (Surd::zero(), false)
        } else {
            (lo, lo_open)
        };
        let one = Surd::one();
        let (hi, hi_open) = if hi > one {
            (one, false)
        } else {
            (hi, hi_open)
        };
        Region {
            lo,
            lo_open,
            hi,
            hi_open,
        }
    }

    pub fn closed(lo: Surd, hi: Surd) -> Region {
        Region::new(lo, false, hi, false)
    }

    pub fn closed_q(lo: &Rational, hi: &Rational) -> Region {
        Region::closed(Surd::from(lo), Surd::from(hi))
    }

    pub fn open(lo: Surd, hi: Surd) -> Region {
        Region::new(lo, true, hi, true)
    }

    pub fn unit() -> Region {
        Region::closed(Surd::zero(), Surd::one())
    }

    pub fn point(x: Surd) -> Region {
        Region::closed(x.clone(), x)
    }

    /// Open ball `B(x, 2^-n)` intersected with [0,1].
    pub fn ball(x: &Surd, n: u32) -> Region {
        let r = Rational::pow2_neg(n);
        Region::open(x.shift(&-r.clone()), x.shift(&r))
    }

    /// `(x, x + 2^-n)` or `(x - 2^-n, x)`.
    pub fn right_of(x: &Surd, n: u32) -> Region {
        Region::open(x.clone(), x.shift(&Rational::pow2_neg(n)))
    }

    pub fn left_of(x: &Surd, n: u32) -> Region {
        Region::open(x.shift(&-Rational::pow2_neg(n)), x.clone())
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => self.lo_open || self.hi_open,
            std::cmp::Ordering::Less => false,
        }
    }

    /// The single point, if the region is degenerate.
    pub fn as_point(&self) -> Option<&Surd> {
        (!self.is_empty() && self.lo == self.hi).then_some(&self.lo)
    }

    /// Nonempty with nonempty interior.
    pub fn is_proper(&self) -> bool {
        self.lo < self.hi
    }

    pub fn contains(&self, x: &Surd) -> bool {
        let above = if self.lo_open {
            x > &self.lo
        } else {
            x >= &self.lo
        };
        let below = if self.hi_open {
            x < &self.hi
        } else {
            x <= &self.hi
        };
        above && below
    }

    /// Contains `(0, eps)` for some `eps > 0`.
    pub fn reaches_zero(&self) -> bool {
        self.lo.is_zero() && self.is_proper()
    }

    /// Intersection of the open interval `(a, b)` with this region, reduced to
    /// its closure endpoints; `None` when the interior is empty.
    pub fn clip_open(&self, a: &Surd, b: &Surd) -> Option<(Surd, Surd)> {
        let lo = a.clone().max(self.lo.clone());
        let hi = b.clone().min(self.hi.clone());
        (lo < hi).then_some((lo, hi))
    }

    pub fn width(&self) -> Surd {
        &self.hi - &self.lo
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// Which points an extreme ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum View {
    /// Rationals only: the collapsed, second-order form of a query.
    Rational,
    /// Rationals plus every special point (set member, breakpoint) whose
    /// index is at most the probe bound.
    Probed(u64),
    /// All reals.
    Full,
}

impl View {
    pub fn sees_index(self, index: u64) -> bool {
        match self {
            View::Rational => false,
            View::Probed(p) => index <= p,
            View::Full => true,
        }
    }

    pub fn sees_point(self, x: &Surd) -> bool {
        !matches!(self, View::Rational) || x.is_rational()
    }

    pub fn sees_member(self, index: u64, x: &Surd) -> bool {
        x.is_rational() || self.sees_index(index)
    }

    pub fn cap(self) -> Option<u64> {
        match self {
            View::Probed(p) => Some(p),
            _ => None,
        }
    }
}

/// The band index `n` with `2^-(n+1) <= y < 2^-n`, for `0 < y < 1`; 1 maps to 0.
pub fn band(y: &Surd) -> u32 {
    let n = log2_ceil_inv(y);
    n.saturating_sub(1)
}

/// `[2^-(n+1), 2^-n)` as rational endpoints.
pub fn band_bounds(n: u32) -> (Rational, Rational) {
    (Rational::pow2_neg(n + 1), Rational::pow2_neg(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_of_samples() {
        assert_eq!(band(&Surd::sqrt_half_scaled(0)), 0);
        assert_eq!(band(&Surd::sqrt_half_scaled(5)), 5);
        assert_eq!(band(&Surd::from(Rational::new(1, 2))), 0);
        assert_eq!(band(&Surd::from(Rational::new(1, 4))), 1);
        assert_eq!(band(&Surd::from(Rational::new(3, 8))), 1);
        assert_eq!(band(&Surd::one()), 0);
    }

    #[test]
    fn clipping_and_emptiness() {
        let r = Region::ball(&Surd::zero(), 1);
        assert_eq!(r.lo, Surd::zero());
        assert!(!r.lo_open);
        assert!(r.reaches_zero());
        assert!(Region::open(Surd::one(), Surd::one()).is_empty());
        assert_eq!(Region::point(Surd::one()).as_point(), Some(&Surd::one()));
    }
}
