//! Fixed enumerations of rationals and rational intervals. Indices are part
//! of the contract: tie-breaks elsewhere depend on "least index".

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{Rational, Surd};

/// ℚ ∩ [0,1] by denominator, then numerator: 0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, ...
pub fn rational_enum_unit() -> impl Iterator<Item = Rational> {
    let head = [Rational::zero(), Rational::one()].into_iter();
    head.chain((2i64..).flat_map(|d| {
        (1..d)
            .filter(move |p| p.gcd(&d) == 1)
            .map(move |p| Rational::new(p, d))
    }))
}

/// ℚ ∩ [-1,1] by denominator, then numerator: -1, 0, 1, -1/2, 1/2, -2/3, -1/3, 1/3, 2/3, ...
pub fn rational_enum_signed() -> impl Iterator<Item = Rational> {
    let head = [Rational::integer(-1), Rational::zero(), Rational::one()].into_iter();
    head.chain((2i64..).flat_map(|d| {
        (-(d - 1)..d)
            .filter(move |p| *p != 0 && p.gcd(&d) == 1)
            .map(move |p| Rational::new(p, d))
    }))
}

/// Overlapping dyadic intervals `(j/2^d, (j+2)/2^d)` inside [0,1], by depth
/// `d >= 1` then `j`. Every open subset of [0,1] is a union of these.
pub fn dyadic_interval_enum() -> impl Iterator<Item = (Rational, Rational)> {
    (1u32..).flat_map(|d| {
        let count = (1u64 << d.min(62)) - 1;
        (0..count).map(move |j| (Rational::dyadic(j, d), Rational::dyadic(j + 2, d)))
    })
}

/// Rational of least denominator (then least absolute numerator) in the
/// interval between `lo` and `hi`; `None` when the interval holds no rational.
/// `hi = None` means unbounded above.
pub fn simplest_in(lo: &Surd, lo_open: bool, hi: Option<&Surd>, hi_open: bool) -> Option<Rational> {
    if let Some(h) = hi {
        match lo.cmp(h) {
            std::cmp::Ordering::Greater => return None,
            std::cmp::Ordering::Equal => {
                return if lo_open || hi_open {
                    None
                } else {
                    lo.to_rational()
                };
            }
            std::cmp::Ordering::Less => {}
        }
    }
    let zero = Surd::zero();
    let admits = |x: &Surd| {
        let above = if lo_open { x > lo } else { x >= lo };
        let below = match hi {
            None => true,
            Some(h) if hi_open => x < h,
            Some(h) => x <= h,
        };
        above && below
    };
    if admits(&zero) {
        return Some(Rational::zero());
    }
    if lo.is_negative() {
        // Whole interval is negative: mirror.
        let h = hi.expect("bounded when negative and excluding 0");
        let neg_lo = -h;
        let neg_hi = -lo;
        return simplest_in(&neg_lo, hi_open, Some(&neg_hi), lo_open).map(|r| -r);
    }
    simplest_positive(lo, lo_open, hi, hi_open, 0)
}

fn simplest_positive(
    lo: &Surd,
    lo_open: bool,
    hi: Option<&Surd>,
    hi_open: bool,
    depth: u32,
) -> Option<Rational> {
    // Continued-fraction descent; depth is bounded by the partial quotients of
    // the endpoints, which are finite for rationals and periodic for quadratic
    // surds. The guard only protects against pathological callers.
    if depth > 4096 {
        return None;
    }
    let fl = lo.floor();
    let fl_s = Surd::from(Rational::from_bigint(fl.clone()));
    let in_range = |x: &Surd| {
        let above = if lo_open { x > lo } else { x >= lo };
        let below = match hi {
            None => true,
            Some(h) if hi_open => x < h,
            Some(h) => x <= h,
        };
        above && below
    };
    if in_range(&fl_s) {
        return Some(Rational::from_bigint(fl));
    }
    let next = Surd::from(Rational::from_bigint(&fl + BigInt::one()));
    if in_range(&next) {
        return Some(Rational::from_bigint(&fl + BigInt::one()));
    }
    // lo, hi both in (fl, fl+1): x = fl + 1/y with y between 1/(hi-fl) and 1/(lo-fl).
    let h = hi?;
    let new_lo = (h - &fl_s).recip();
    let lo_frac = lo - &fl_s;
    let new_hi = if lo_frac.is_zero() {
        None
    } else {
        Some(lo_frac.recip())
    };
    let y = simplest_positive(&new_lo, hi_open, new_hi.as_ref(), lo_open, depth + 1)?;
    if y.is_zero() {
        return None;
    }
    Some(Rational::from_bigint(fl) + y.recip())
}

/// Least positive `N` with `2^-N <= d`, for `d > 0`.
pub(crate) fn log2_ceil_inv(d: &Surd) -> u32 {
    debug_assert!(d.is_positive());
    let mut n = 0u32;
    let mut p = Surd::one();
    while &p > d {
        n += 1;
        p = p.scale(&Rational::new(1, 2));
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn unit_enum_prefix() {
        let got: Vec<_> = rational_enum_unit().take(7).collect();
        assert_eq!(
            got,
            vec![
                q(0, 1),
                q(1, 1),
                q(1, 2),
                q(1, 3),
                q(2, 3),
                q(1, 4),
                q(3, 4)
            ]
        );
    }

    #[test]
    fn signed_enum_prefix() {
        let got: Vec<_> = rational_enum_signed().take(9).collect();
        let want = vec![
            q(-1, 1),
            q(0, 1),
            q(1, 1),
            q(-1, 2),
            q(1, 2),
            q(-2, 3),
            q(-1, 3),
            q(1, 3),
            q(2, 3),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn dyadic_intervals_prefix() {
        let got: Vec<_> = dyadic_interval_enum().take(4).collect();
        assert_eq!(got[0], (q(0, 1), q(1, 1)));
        assert_eq!(got[1], (q(0, 1), q(1, 2)));
        assert_eq!(got[3], (q(1, 2), q(1, 1)));
    }

    fn brute_simplest(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Rational {
        for d in 1..=4096i64 {
            for p in 0..=d {
                let x = p as f64 / d as f64;
                let ok_lo = if lo_open { x > lo } else { x >= lo };
                let ok_hi = if hi_open { x < hi } else { x <= hi };
                if ok_lo && ok_hi {
                    return q(p, d);
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn simplest_matches_brute_force() {
        let cases = [
            (q(1, 4), q(3, 4)),
            (q(3, 8), q(5, 8)),
            (q(1, 3), q(2, 5)),
            (q(7, 10), q(71, 100)),
            (q(0, 1), q(1, 9)),
        ];
        for (a, b) in cases {
            for (lo_open, hi_open) in [(false, false), (true, true), (true, false)] {
                let got =
                    simplest_in(&Surd::from(&a), lo_open, Some(&Surd::from(&b)), hi_open).unwrap();
                let want = brute_simplest(a.to_f64(), b.to_f64(), lo_open, hi_open);
                assert_eq!(got.denom(), want.denom(), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn simplest_with_surd_endpoints() {
        // (√2/2 - 1/100, √2/2 + 1/100) = (0.697.., 0.717..) contains 5/7 = 0.714.
        let c = Surd::sqrt_half_scaled(0);
        let r = q(1, 100);
        let got = simplest_in(&c.shift(&-r.clone()), true, Some(&c.shift(&r)), true).unwrap();
        assert_eq!(got, q(5, 7));
        assert_eq!(simplest_in(&c, false, Some(&c), false), None);
    }

    #[test]
    fn log2_helper() {
        assert_eq!(log2_ceil_inv(&Surd::from(q(1, 8))), 3);
        assert_eq!(log2_ceil_inv(&Surd::from(q(1, 5))), 3);
        assert_eq!(log2_ceil_inv(&Surd::one()), 0);
    }
}
