//! Exact arithmetic in the quadratic field ℚ(√2).
//!
//! Every point and every function value in the universe lives here: the
//! canonical irrational carriers are `√2/2^{n+1}` and their rational
//! shifts, and affine pieces evaluated at such points stay in the field.
//! Comparisons are decided symbolically by squaring.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::AbyssError;

/// `rational + sqrt2 · √2`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    rational: Rational,
    sqrt2: Rational,
}

impl Surd {
    pub fn new(rational: Rational, sqrt2: Rational) -> Self {
        Surd { rational, sqrt2 }
    }

    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn one() -> Self {
        Surd::from(Rational::one())
    }

    /// `√2 / 2^{n+1}`, the canonical irrational carrier.
    pub fn sqrt_half_scaled(n: u32) -> Self {
        Surd::new(Rational::zero(), Rational::pow2_neg(n + 1))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn sqrt2_part(&self) -> &Rational {
        &self.sqrt2
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.rational.clone())
    }

    pub fn shift(&self, q: &Rational) -> Surd {
        Surd::new(&self.rational + q, self.sqrt2.clone())
    }

    pub fn signum(&self) -> Ordering {
        let a = self.rational.signum();
        let b = self.sqrt2.signum();
        match (a, b) {
            (_, Ordering::Equal) => a,
            (Ordering::Equal, _) => b,
            _ if a == b => a,
            _ => {
                // opposite signs: compare a² with 2b²
                let a2 = &self.rational * &self.rational;
                let b2 = &self.sqrt2 * &self.sqrt2 * Rational::integer(2);
                match a2.cmp(&b2) {
                    Ordering::Greater => a,
                    Ordering::Less => b,
                    Ordering::Equal => unreachable!("√2 is irrational"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.sqrt2.is_zero()
    }

    pub fn abs(&self) -> Surd {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn conjugate(&self) -> Surd {
        Surd::new(self.rational.clone(), -&self.sqrt2)
    }

    /// Field norm `a² − 2b²`; zero only for zero.
    pub fn norm(&self) -> Rational {
        &self.rational * &self.rational - &self.sqrt2 * &self.sqrt2 * Rational::integer(2)
    }

    pub fn recip(&self) -> Surd {
        assert!(!self.is_zero(), "reciprocal of zero");
        let n = self.norm();
        let c = self.conjugate();
        Surd::new(&c.rational / &n, &c.sqrt2 / &n)
    }

    pub fn scale(&self, q: &Rational) -> Surd {
        Surd::new(&self.rational * q, &self.sqrt2 * q)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.rational.floor();
        }
        // b√2 = sign(b)·√(2 n²)/d for b = n/d; isqrt brackets it within 1/d.
        let b = &self.sqrt2;
        let n = b.numer().abs();
        let d = b.denom().clone();
        let root = (&n * &n * BigInt::from(2)).sqrt();
        let approx = Rational::from_bigs(root, d).expect("positive denominator");
        let approx = if b.is_negative() { -approx } else { approx };
        let mut m = (&self.rational + &approx).floor();
        loop {
            let m_s = Surd::from(Rational::from_bigint(m.clone()));
            if &m_s > self {
                m -= 1;
                continue;
            }
            let next = Surd::from(Rational::from_bigint(&m + 1));
            if &next <= self {
                m += 1;
                continue;
            }
            return m;
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Dyadic rational `floor(x · 2^k) / 2^k`.
    pub fn floor_dyadic(&self, k: u32) -> Rational {
        let scaled = self.scale(&Rational::dyadic(BigInt::one() << k as usize, 0));
        Rational::dyadic(scaled.floor(), k)
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64() + self.sqrt2.to_f64() * std::f64::consts::SQRT_2
    }

    pub fn min(self, other: Surd) -> Surd {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Surd) -> Surd {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Self {
        Surd::new(r, Rational::zero())
    }
}

impl From<&Rational> for Surd {
    fn from(r: &Rational) -> Self {
        Surd::new(r.clone(), Rational::zero())
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.sqrt2 == other.sqrt2 {
            return self.rational.cmp(&other.rational);
        }
        (self - other).signum()
    }
}

impl<'b> Add<&'b Surd> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &'b Surd) -> Surd {
        Surd::new(&self.rational + &rhs.rational, &self.sqrt2 + &rhs.sqrt2)
    }
}

impl<'b> Sub<&'b Surd> for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &'b Surd) -> Surd {
        Surd::new(&self.rational - &rhs.rational, &self.sqrt2 - &rhs.sqrt2)
    }
}

impl<'b> Mul<&'b Surd> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &'b Surd) -> Surd {
        let two = Rational::integer(2);
        Surd::new(
            &self.rational * &rhs.rational + &self.sqrt2 * &rhs.sqrt2 * two,
            &self.rational * &rhs.sqrt2 + &self.sqrt2 * &rhs.rational,
        )
    }
}

impl<'b> Div<&'b Surd> for &Surd {
    type Output = Surd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'b Surd) -> Surd {
        self * &rhs.recip()
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Surd> for Surd {
            type Output = Surd;
            fn $method(self, rhs: Surd) -> Surd {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Surd> for Surd {
            type Output = Surd;
            fn $method(self, rhs: &'a Surd) -> Surd {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Surd> for &'a Surd {
            type Output = Surd;
            fn $method(self, rhs: Surd) -> Surd {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.rational, -self.sqrt2)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-&self.rational, -&self.sqrt2)
    }
}

impl fmt::Display for Surd {
    /// `q`, `b*sqrt2`, or `b*sqrt2+q` with `q`, `b` written as `n/d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt2.is_zero() {
            return write!(f, "{}", self.rational);
        }
        write!(f, "{}*sqrt2", self.sqrt2)?;
        if !self.rational.is_zero() {
            if self.rational.is_negative() {
                write!(f, "{}", self.rational)?;
            } else {
                write!(f, "+{}", self.rational)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Surd {
    type Err = AbyssError;

    /// Parses `q`, `b*sqrt2`, `b*sqrt2+q`, `b*sqrt2-q`, the shorthand
    /// `sqrt2` (meaning `1*sqrt2`), and `sqrt2/d` in place of `sqrt2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.len() > 16384 {
            return Err(AbyssError::Parse("point literal too long".into()));
        }
        let Some(pos) = s.find("sqrt2") else {
            return Ok(Surd::from(s.parse::<Rational>()?));
        };
        let (head, tail) = s.split_at(pos);
        let tail = &tail["sqrt2".len()..];
        let coeff = match head.trim() {
            "" => Rational::one(),
            "-" => -Rational::one(),
            h => match h.strip_suffix('*') {
                Some(c) => c.trim().parse()?,
                None => {
                    return Err(AbyssError::Parse(format!(
                        "expected '*' before sqrt2 in {s:?}"
                    )))
                }
            },
        };
        let mut tail = tail.trim();
        let mut coeff = coeff;
        if let Some(rest) = tail.strip_prefix('/') {
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let d: Rational = rest[..end].trim().parse()?;
            if d.is_zero() {
                return Err(AbyssError::Parse(format!("zero divisor in {s:?}")));
            }
            coeff = coeff / d;
            tail = rest[end..].trim();
        }
        let rational = if tail.is_empty() {
            Rational::zero()
        } else if let Some(rest) = tail.strip_prefix('+') {
            rest.trim().parse()?
        } else if tail.starts_with('-') {
            tail.parse()?
        } else {
            return Err(AbyssError::Parse(format!(
                "unexpected trailing text in {s:?}"
            )));
        };
        if tail.contains("sqrt2") {
            return Err(AbyssError::Parse(format!("repeated sqrt2 in {s:?}")));
        }
        Ok(Surd::new(rational, coeff))
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Surd {
        x.parse().unwrap()
    }

    #[test]
    fn orders_against_rationals() {
        let half_root = Surd::sqrt_half_scaled(0);
        assert!(half_root > s("7/10"));
        assert!(half_root < s("71/100"));
        assert!(s("1/2*sqrt2-1/2") > Surd::zero());
        assert!(s("-1/2*sqrt2+1") > Surd::zero());
        assert!(s("-1*sqrt2+7/5") < Surd::zero());
    }

    #[test]
    fn floor_matches_float_on_samples() {
        for (x, want) in [
            ("sqrt2", 1),
            ("-1*sqrt2", -2),
            ("3*sqrt2-1/3", 3),
            ("1/1024*sqrt2", 0),
        ] {
            assert_eq!(s(x).floor(), BigInt::from(want), "{x}");
        }
        assert_eq!(
            Surd::sqrt_half_scaled(0).floor_dyadic(4),
            Rational::new(11, 16)
        );
    }

    #[test]
    fn field_inverse() {
        let x = s("3/7*sqrt2+2/5");
        assert_eq!(&x * &x.recip(), Surd::one());
    }

    #[test]
    fn text_round_trip() {
        for x in ["0/1", "1/3", "1/2*sqrt2", "1/4*sqrt2+1/8", "-3/2*sqrt2-1/5"] {
            assert_eq!(s(x).to_string(), x);
        }
        assert_eq!(s("sqrt2"), Surd::new(Rational::zero(), Rational::one()));
        assert!("sqrt2sqrt2".parse::<Surd>().is_err());
        assert!("2sqrt2".parse::<Surd>().is_err());
        assert!("1*sqrt2+1*sqrt2".parse::<Surd>().is_err());
        assert_eq!(s("sqrt2/2"), s("1/2*sqrt2"));
        assert_eq!(s("-sqrt2/4+1"), s("-1/4*sqrt2+1"));
        assert!("sqrt2/0".parse::<Surd>().is_err());
        assert!("sqrt2/".parse::<Surd>().is_err());
    }
}
