//! Countable sets `A` with an injective index `Y`, the seed of every
//! adversarial instance.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::region::{band, band_bounds, Region};
use crate::error::AbyssError;
use crate::exact::{Rational, Surd};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub index: u64,
    pub point: Surd,
}

/// A countable subset of [0,1] given by `n -> a_n` and its inverse `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum CountableSet {
    /// `a_n = sqrt2 / 2^(n+1)` for `n < limit` (all `n` when absent).
    Sqrt2Halving {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<u64>,
    },
    Finite {
        members: Vec<Member>,
    },
    /// The nowhere dense companion set: member `n` is `a_n - q`, for the
    /// least-index `q` in the enumeration of ℚ ∩ [-1,1] that moves `a_n` into
    /// `[2^-(n+1), 2^-n)`.
    Tilde {
        base: Box<CountableSet>,
    },
    /// Members of `base` with index at least `min`.
    IndexAbove {
        base: Box<CountableSet>,
        min: u64,
    },
}

/// Guard on scans over an infinite set. Far beyond any precision this crate
/// is asked for.
const SCAN_LIMIT: u64 = 1 << 16;

impl CountableSet {
    pub fn canonical() -> Self {
        CountableSet::Sqrt2Halving { limit: None }
    }

    pub fn canonical_prefix(len: u64) -> Self {
        CountableSet::Sqrt2Halving { limit: Some(len) }
    }

    pub fn finite(points: Vec<Surd>) -> Result<Self, AbyssError> {
        let members = points
            .into_iter()
            .enumerate()
            .map(|(i, point)| Member {
                index: i as u64,
                point,
            })
            .collect();
        let set = CountableSet::Finite { members };
        set.validate()?;
        Ok(set)
    }

    pub fn tilde(base: CountableSet) -> Result<Self, AbyssError> {
        let set = CountableSet::Tilde {
            base: Box::new(base),
        };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<(), AbyssError> {
        match self {
            CountableSet::Sqrt2Halving { .. } => Ok(()),
            CountableSet::Finite { members } => {
                for (i, m) in members.iter().enumerate() {
                    if m.point.is_negative() || m.point > Surd::one() {
                        return Err(AbyssError::Constructor(format!(
                            "member {} lies outside [0,1]",
                            m.point
                        )));
                    }
                    for other in &members[..i] {
                        if other.index == m.index {
                            return Err(AbyssError::Constructor(format!(
                                "index {} used twice",
                                m.index
                            )));
                        }
                        if other.point == m.point {
                            return Err(AbyssError::Constructor(format!(
                                "duplicate point {}",
                                m.point
                            )));
                        }
                    }
                }
                Ok(())
            }
            CountableSet::Tilde { base } => {
                base.validate()?;
                if !base.all_irrational() {
                    return Err(AbyssError::Constructor(
                        "companion set needs an all-irrational base".into(),
                    ));
                }
                if let CountableSet::Finite { members } = base.as_ref() {
                    if members
                        .iter()
                        .any(|m| !m.point.is_positive() || m.point >= Surd::one())
                    {
                        return Err(AbyssError::Constructor(
                            "companion set needs members in (0,1)".into(),
                        ));
                    }
                }
                Ok(())
            }
            CountableSet::IndexAbove { base, .. } => base.validate(),
        }
    }

    /// No member is rational.
    pub fn all_irrational(&self) -> bool {
        match self {
            CountableSet::Sqrt2Halving { .. } | CountableSet::Tilde { .. } => true,
            CountableSet::Finite { members } => members.iter().all(|m| !m.point.is_rational()),
            CountableSet::IndexAbove { base, .. } => base.all_irrational(),
        }
    }

    /// Member `n` lies in band `n` (and the closure adds at most 0).
    pub fn has_band_property(&self) -> bool {
        match self {
            CountableSet::Sqrt2Halving { .. } | CountableSet::Tilde { .. } => true,
            CountableSet::Finite { .. } => false,
            CountableSet::IndexAbove { base, .. } => base.has_band_property(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.max_index_bound().is_some()
    }

    /// Largest possible index, `None` when unbounded.
    pub fn max_index_bound(&self) -> Option<Option<u64>> {
        match self {
            CountableSet::Sqrt2Halving { limit } => limit.map(|l| l.checked_sub(1)),
            CountableSet::Finite { members } => Some(members.iter().map(|m| m.index).max()),
            CountableSet::Tilde { base } => base.max_index_bound(),
            CountableSet::IndexAbove { base, min } => {
                base.max_index_bound().map(|m| m.filter(|&top| top >= *min))
            }
        }
    }

    /// Smallest index in use.
    pub fn min_index(&self) -> Option<u64> {
        match self {
            CountableSet::Sqrt2Halving { limit } => (limit.unwrap_or(1) > 0).then_some(0),
            CountableSet::Finite { members } => members.iter().map(|m| m.index).min(),
            CountableSet::Tilde { base } => base.min_index(),
            CountableSet::IndexAbove { base, min } => {
                if base.is_finite() {
                    base.members_upto(u64::MAX)
                        .into_iter()
                        .map(|(i, _)| i)
                        .find(|i| i >= min)
                } else {
                    // Infinite sets here use every index from their minimum on.
                    base.min_index().map(|lo| lo.max(*min))
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.min_index().is_none()
    }

    /// `a_n`, if index `n` is in use.
    pub fn member(&self, n: u64) -> Option<Surd> {
        match self {
            CountableSet::Sqrt2Halving { limit } => (limit.is_none_or(|l| n < l)
                && n < u32::MAX as u64)
                .then(|| Surd::sqrt_half_scaled(n as u32)),
            CountableSet::Finite { members } => members
                .iter()
                .find(|m| m.index == n)
                .map(|m| m.point.clone()),
            CountableSet::Tilde { base } => base.member(n).map(|a| tilde_point(&a, n)),
            CountableSet::IndexAbove { base, min } => (n >= *min).then(|| base.member(n)).flatten(),
        }
    }

    /// `Y(x)` for members, `None` otherwise.
    pub fn index_of(&self, x: &Surd) -> Option<u64> {
        match self {
            CountableSet::Sqrt2Halving { limit } => {
                if !x.rational_part().is_zero() {
                    return None;
                }
                // x = 2^-(n+1) sqrt2
                let n = x.sqrt2_part().inverse_power_of_two()?.checked_sub(1)? as u64;
                limit.is_none_or(|l| n < l).then_some(n)
            }
            CountableSet::Finite { members } => {
                members.iter().find(|m| &m.point == x).map(|m| m.index)
            }
            CountableSet::Tilde { .. } => {
                if !x.is_positive() || x >= &Surd::one() {
                    return None;
                }
                let n = band(x) as u64;
                (self.member(n).as_ref() == Some(x)).then_some(n)
            }
            CountableSet::IndexAbove { base, min } => base.index_of(x).filter(|i| i >= min),
        }
    }

    /// Members with index at most `cap`, ordered by index.
    pub fn members_upto(&self, cap: u64) -> Vec<(u64, Surd)> {
        match self {
            CountableSet::Finite { members } => {
                let mut out: Vec<_> = members
                    .iter()
                    .filter(|m| m.index <= cap)
                    .map(|m| (m.index, m.point.clone()))
                    .collect();
                out.sort_by_key(|(i, _)| *i);
                out
            }
            CountableSet::IndexAbove { base, min } => base
                .members_upto(cap)
                .into_iter()
                .filter(|(i, _)| i >= min)
                .collect(),
            CountableSet::Tilde { base } => base
                .members_upto(cap)
                .into_iter()
                .map(|(i, a)| (i, tilde_point(&a, i)))
                .collect(),
            CountableSet::Sqrt2Halving { .. } => {
                let top = match self.max_index_bound() {
                    Some(None) => return Vec::new(),
                    Some(Some(t)) => t.min(cap),
                    None => cap,
                };
                let top = top.min(SCAN_LIMIT);
                (0..=top)
                    .filter_map(|i| self.member(i).map(|p| (i, p)))
                    .collect()
            }
        }
    }

    /// Indices that can possibly have a member in `r`, as an inclusive range
    /// (upper end `None` when unbounded). Only meaningful with the band property.
    fn band_range(&self, r: &Region) -> (u64, Option<u64>) {
        let first = if r.hi.is_positive() {
            band(&r.hi) as u64
        } else {
            u64::MAX
        };
        let last = if r.lo.is_positive() {
            Some(band(&r.lo) as u64)
        } else {
            None
        };
        (first, last)
    }

    /// Members lying in `r` with index at most `cap`, by index. Infinite
    /// scans are truncated at an internal guard.
    pub fn members_in(&self, r: &Region, cap: Option<u64>) -> Vec<(u64, Surd)> {
        if r.is_empty() {
            return Vec::new();
        }
        let bound = match self.max_index_bound() {
            Some(None) => return Vec::new(),
            Some(Some(t)) => Some(t),
            None => None,
        };
        let cap = match (cap, bound) {
            (Some(c), Some(b)) => Some(c.min(b)),
            (c, b) => c.or(b),
        };
        if self.has_band_property() {
            let (first, last) = self.band_range(r);
            let last = match (last, cap) {
                (Some(l), Some(c)) => l.min(c),
                (Some(l), None) => l,
                (None, Some(c)) => c,
                (None, None) => first.saturating_add(SCAN_LIMIT),
            };
            let start = first.max(self.min_index().unwrap_or(0));
            if start > last {
                return Vec::new();
            }
            return (start..=last)
                .filter_map(|i| self.member(i).filter(|p| r.contains(p)).map(|p| (i, p)))
                .collect();
        }
        self.members_upto(cap.unwrap_or(SCAN_LIMIT))
            .into_iter()
            .filter(|(_, p)| r.contains(p))
            .collect()
    }

    /// Least-index member in `r` with index at most `cap`.
    pub fn first_in(&self, r: &Region, cap: Option<u64>) -> Option<(u64, Surd)> {
        if r.is_empty() {
            return None;
        }
        if self.has_band_property() {
            let (first, last) = self.band_range(r);
            let start = first.max(self.min_index()?);
            let mut stop = last.unwrap_or(u64::MAX);
            if let Some(c) = cap {
                stop = stop.min(c);
            }
            if let Some(Some(t)) = self.max_index_bound() {
                stop = stop.min(t);
            }
            let mut i = start;
            while i <= stop && i - start <= SCAN_LIMIT {
                if let Some(p) = self.member(i) {
                    if r.contains(&p) {
                        return Some((i, p));
                    }
                }
                i += 1;
            }
            return None;
        }
        self.members_in(r, cap).into_iter().next()
    }

    /// Greatest index of a member in `r` (respecting `cap`); `Err` when
    /// there are infinitely many.
    pub fn last_in(&self, r: &Region, cap: Option<u64>) -> Result<Option<(u64, Surd)>, Unbounded> {
        if r.is_empty() {
            return Ok(None);
        }
        let infinite = self.max_index_bound().is_none();
        if infinite && cap.is_none() {
            let (_, last) = if self.has_band_property() {
                self.band_range(r)
            } else {
                (0, None)
            };
            if last.is_none() {
                // Region reaches 0 and every large band is populated.
                return if self.first_in(r, None).is_some() {
                    Err(Unbounded)
                } else {
                    Ok(None)
                };
            }
        }
        Ok(self.members_in(r, cap).into_iter().last())
    }
}

/// Infinitely many members fall in the region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unbounded;

/// `a - q` for the least-index `q` placing it in band `n`.
pub fn tilde_point(a: &Surd, n: u64) -> Surd {
    let n = n.min(u32::MAX as u64 - 1) as u32;
    let (lo, hi) = band_bounds(n);
    let (lo, hi) = (Surd::from(lo), Surd::from(hi));
    // Same order as the enumeration of ℚ ∩ [-1,1]: by denominator, then
    // numerator. For each denominator only the numerators with
    // a - hi < p/d <= a - lo matter, so jump straight to the smallest one.
    let lower = a - &hi;
    let upper = a - &lo;
    let mut d: i64 = 1;
    loop {
        let dd = Rational::integer(d);
        let mut p: num_bigint::BigInt = lower.scale(&dd).floor() + 1;
        let top = upper.scale(&dd).floor();
        while p <= top {
            let pi: i64 = (&p).try_into().expect("numerator fits");
            let usable = if d == 1 {
                (-1..=1).contains(&pi)
            } else {
                pi != 0 && pi.abs() < d && pi.gcd(&d) == 1
            };
            if usable {
                return a.shift(&-Rational::new(pi, d));
            }
            p += 1;
        }
        d += 1;
    }
}

/// The first `q` from the enumeration of ℚ ∩ [-1,1] used for member `n`.
pub fn tilde_shift(a: &Surd, n: u64) -> Rational {
    let y = tilde_point(a, n);
    (a - &y).to_rational().expect("shift is rational")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_members_and_index() {
        let a = CountableSet::canonical();
        assert_eq!(a.member(0), Some(Surd::sqrt_half_scaled(0)));
        assert_eq!(a.index_of(&Surd::sqrt_half_scaled(3)), Some(3));
        assert_eq!(a.index_of(&Surd::from(Rational::new(1, 2))), None);
        assert!(a.has_band_property());
    }

    #[test]
    fn canonical_companion_is_itself() {
        let a = CountableSet::canonical();
        let t = CountableSet::tilde(a.clone()).unwrap();
        for n in 0..12 {
            assert_eq!(t.member(n), a.member(n));
            assert_eq!(tilde_shift(&a.member(n).unwrap(), n), Rational::zero());
        }
    }

    #[test]
    fn companion_of_shifted_singleton() {
        // 1/8 + sqrt2/8 = .30 has index 0, so its companion lies in [1/2, 1).
        let p: Surd = "1/8*sqrt2+1/8".parse().unwrap();
        let t = CountableSet::tilde(CountableSet::finite(vec![p.clone()]).unwrap()).unwrap();
        let y = t.member(0).unwrap();
        assert!(y >= Surd::from(Rational::new(1, 2)) && y < Surd::one());
        // q = -1, 0, 1 miss the band; q = -1/2 gives .80.
        assert_eq!(tilde_shift(&p, 0), Rational::new(-1, 2));
        assert_eq!(t.index_of(&y), Some(0));
        assert_eq!(t.index_of(&Surd::zero()), None);
    }

    #[test]
    fn rational_base_rejected_for_companion() {
        let base = CountableSet::finite(vec![Surd::from(Rational::new(1, 3))]).unwrap();
        assert!(CountableSet::tilde(base).is_err());
    }

    #[test]
    fn duplicate_points_rejected() {
        let p = Surd::sqrt_half_scaled(1);
        assert!(CountableSet::finite(vec![p.clone(), p]).is_err());
    }

    #[test]
    fn first_and_last_in_regions() {
        let a = CountableSet::canonical();
        let r = Region::closed_q(&Rational::new(1, 10), &Rational::new(1, 2));
        // a_1 = .3535, a_2 = .1767, a_3 = .0883
        assert_eq!(a.first_in(&r, None).map(|m| m.0), Some(1));
        assert_eq!(a.last_in(&r, None).unwrap().map(|m| m.0), Some(2));
        let near0 = Region::closed_q(&Rational::zero(), &Rational::new(1, 100));
        assert_eq!(a.first_in(&near0, None).map(|m| m.0), Some(7));
        assert!(a.last_in(&near0, None).is_err());
        assert_eq!(a.last_in(&near0, Some(9)).unwrap().map(|m| m.0), Some(9));
        let above = CountableSet::IndexAbove {
            base: Box::new(a),
            min: 3,
        };
        assert_eq!(above.first_in(&r, None), None);
    }
}
