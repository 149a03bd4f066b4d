use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{Rational, Surd};
use crate::error::AbyssError;

/// Target accuracy `2^-k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Precision(pub u32);

impl Precision {
    pub fn epsilon(self) -> Rational {
        Rational::pow2_neg(self.0)
    }
}

/// A closed interval `[lower, upper]` with rational (usually dyadic) endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicInterval {
    lower: Rational,
    upper: Rational,
}

impl DyadicInterval {
    pub fn new(lower: Rational, upper: Rational) -> Result<Self, AbyssError> {
        if lower > upper {
            return Err(AbyssError::Domain(format!(
                "interval [{lower}, {upper}] is reversed"
            )));
        }
        Ok(DyadicInterval { lower, upper })
    }

    pub fn unit() -> Self {
        DyadicInterval {
            lower: Rational::zero(),
            upper: Rational::one(),
        }
    }

    pub fn point(x: Rational) -> Self {
        DyadicInterval {
            lower: x.clone(),
            upper: x,
        }
    }

    /// Smallest interval of width `2^-k` on the dyadic grid of step `2^-k`
    /// containing `x`.
    pub fn enclose(x: &Surd, k: u32) -> Self {
        let lower = x.floor_dyadic(k);
        let upper = if Surd::from(&lower) == *x {
            lower.clone()
        } else {
            &lower + Rational::pow2_neg(k)
        };
        DyadicInterval { lower, upper }
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> Rational {
        self.lower.midpoint(&self.upper)
    }

    pub fn contains(&self, x: &Surd) -> bool {
        Surd::from(&self.lower) <= *x && *x <= Surd::from(&self.upper)
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn is_subset_of(&self, other: &DyadicInterval) -> bool {
        other.lower <= self.lower && self.upper <= other.upper
    }

    pub fn intersect(&self, other: &DyadicInterval) -> Option<DyadicInterval> {
        let lower = self.lower.clone().max(other.lower.clone());
        let upper = self.upper.clone().min(other.upper.clone());
        (lower <= upper).then_some(DyadicInterval { lower, upper })
    }
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// `B(x, 2^-k)` as an interval record.
pub fn ball(x: &Rational, k: u32) -> DyadicInterval {
    let r = Rational::pow2_neg(k);
    DyadicInterval {
        lower: x - &r,
        upper: x + &r,
    }
}

/// Splits at the midpoint.
pub fn halve(i: &DyadicInterval) -> Result<(DyadicInterval, DyadicInterval), AbyssError> {
    if i.lower == i.upper {
        return Err(AbyssError::Degenerate(format!("{i:?} cannot be halved")));
    }
    let mid = i.midpoint();
    Ok((
        DyadicInterval {
            lower: i.lower.clone(),
            upper: mid.clone(),
        },
        DyadicInterval {
            lower: mid,
            upper: i.upper.clone(),
        },
    ))
}

/// All `j / 2^n` in `i`, strictly increasing.
pub fn rational_grid(i: &DyadicInterval, n: u32) -> Vec<Rational> {
    let scale = Rational::from_bigint(BigInt::from(1) << n as usize);
    let first = (&i.lower * &scale).ceil();
    let last = (&i.upper * &scale).floor();
    let mut out = Vec::new();
    let mut j = first;
    while j <= last {
        out.push(Rational::dyadic(j.clone(), n));
        j += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    Yes,
    No,
    Unknown,
}

/// Three-valued answer of a simulated oracle query, with the number of
/// predicate evaluations it consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FueledBool {
    pub value: Truth,
    pub fuel_spent: u64,
}

impl FueledBool {
    pub fn yes(fuel_spent: u64) -> Self {
        FueledBool {
            value: Truth::Yes,
            fuel_spent,
        }
    }

    pub fn no(fuel_spent: u64) -> Self {
        FueledBool {
            value: Truth::No,
            fuel_spent,
        }
    }

    pub fn unknown(fuel_spent: u64) -> Self {
        FueledBool {
            value: Truth::Unknown,
            fuel_spent,
        }
    }

    pub fn from_bool(b: bool, fuel_spent: u64) -> Self {
        if b {
            Self::yes(fuel_spent)
        } else {
            Self::no(fuel_spent)
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.value {
            Truth::Yes => Some(true),
            Truth::No => Some(false),
            Truth::Unknown => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn iv(a: Rational, b: Rational) -> DyadicInterval {
        DyadicInterval::new(a, b).unwrap()
    }

    #[test]
    fn ball_examples() {
        assert_eq!(ball(&q(1, 2), 1), iv(q(0, 1), q(1, 1)));
        assert_eq!(ball(&q(1, 2), 2), iv(q(1, 4), q(3, 4)));
        assert_eq!(ball(&q(0, 1), 3), iv(q(-1, 8), q(1, 8)));
        assert_eq!(ball(&q(1, 3), 2), iv(q(1, 12), q(7, 12)));
    }

    #[test]
    fn halve_examples() {
        let (l, r) = halve(&DyadicInterval::unit()).unwrap();
        assert_eq!((l, r), (iv(q(0, 1), q(1, 2)), iv(q(1, 2), q(1, 1))));
        let (l, r) = halve(&iv(q(1, 4), q(3, 4))).unwrap();
        assert_eq!((l, r), (iv(q(1, 4), q(1, 2)), iv(q(1, 2), q(3, 4))));
        let (l, r) = halve(&iv(q(0, 1), q(1, 3))).unwrap();
        assert_eq!((l, r), (iv(q(0, 1), q(1, 6)), iv(q(1, 6), q(1, 3))));
        assert!(matches!(
            halve(&DyadicInterval::point(q(1, 2))),
            Err(AbyssError::Degenerate(_))
        ));
    }

    #[test]
    fn grid_examples() {
        assert_eq!(
            rational_grid(&DyadicInterval::unit(), 1),
            vec![q(0, 1), q(1, 2), q(1, 1)]
        );
        assert_eq!(
            rational_grid(&DyadicInterval::unit(), 2),
            vec![q(0, 1), q(1, 4), q(1, 2), q(3, 4), q(1, 1)]
        );
        assert_eq!(
            rational_grid(&iv(q(1, 4), q(1, 2)), 3),
            vec![q(1, 4), q(3, 8), q(1, 2)]
        );
        assert!(rational_grid(&iv(q(1, 3), q(1, 3)), 4).is_empty());
    }

    #[test]
    fn enclose_brackets() {
        let x = Surd::sqrt_half_scaled(0);
        let e = DyadicInterval::enclose(&x, 10);
        assert!(e.contains(&x));
        assert_eq!(e.width(), Rational::pow2_neg(10));
        assert_eq!(
            DyadicInterval::enclose(&Surd::from(q(1, 4)), 3).width(),
            Rational::zero()
        );
    }
}
