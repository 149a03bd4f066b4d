//! Value-axis interval halving driven by oracle comparisons.

use crate::error::AbyssError;
use crate::exact::{DyadicInterval, FueledBool, Precision, Rational, Surd, Truth};
use crate::oracle::{admit, decide, QuantQuery, Shape};
use crate::universe::{ClassSet, Region, SymbolicFn};

fn require(f: &SymbolicFn, tag: ClassSet, what: &str, shape: Shape<'_>) -> Result<(), AbyssError> {
    // the collapse rule decides admissibility; the tag check names the class
    admit(&shape)?;
    if !f.tags().contains(tag) {
        return Err(AbyssError::Refused {
            shape: shape.kind().name().into(),
            needs: what.into(),
            anchor: "the operation is only defined for this class".into(),
        });
    }
    Ok(())
}

fn closed_region(p: &Rational, q: &Rational) -> Result<Region, AbyssError> {
    if p >= q {
        return Err(AbyssError::Domain(format!(
            "interval [{p}, {q}] is empty or degenerate"
        )));
    }
    if p.is_negative() || q > &Rational::one() {
        return Err(AbyssError::Domain(format!(
            "interval [{p}, {q}] leaves [0,1]"
        )));
    }
    Ok(Region::closed_q(p, q))
}

/// Brackets a real `v` given a seed value `seed <= v` and a test
/// `above(t) = [v > t]`. The bracket starts at integers, so every endpoint
/// is dyadic.
pub(crate) fn bracket(
    seed: &Surd,
    k: Precision,
    fuel: u64,
    mut above: impl FnMut(&Rational) -> Result<FueledBool, AbyssError>,
) -> Result<DyadicInterval, AbyssError> {
    let mut lo = Rational::from_bigint(seed.floor());
    let mut hi = &lo + Rational::one();
    let mut spent = 0u64;
    let mut steps = 0u64;
    let mut ask =
        |t: &Rational, lo: &Rational, hi: &Rational, steps: &mut u64| -> Result<bool, AbyssError> {
            *steps += 1;
            let best = DyadicInterval::new(lo.clone(), hi.clone()).ok();
            if *steps > fuel {
                return Err(AbyssError::fuel(spent, best));
            }
            let r = above(t)?;
            spent += r.fuel_spent;
            match r.value {
                Truth::Yes => Ok(true),
                Truth::No => Ok(false),
                Truth::Unknown => Err(AbyssError::fuel(spent, best)),
            }
        };
    // grow upwards until the top is an upper bound
    while ask(&hi, &lo, &hi, &mut steps)? {
        let w = &hi - &lo;
        lo = hi.clone();
        hi = &hi + &(&w + &w);
    }
    let eps = k.epsilon();
    while &hi - &lo > eps {
        let mid = lo.midpoint(&hi);
        if ask(&mid, &lo, &hi, &mut steps)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    DyadicInterval::new(lo, hi)
}

fn negate(i: DyadicInterval) -> DyadicInterval {
    DyadicInterval::new(-i.upper().clone(), -i.lower().clone()).expect("ordered")
}

/// `sup f` on `[p,q]` to within `2^-k`, for quasi-continuous `f`.
pub fn sup_qc(
    f: &SymbolicFn,
    p: &Rational,
    q: &Rational,
    k: Precision,
    fuel: u64,
) -> Result<DyadicInterval, AbyssError> {
    let region = closed_region(p, q)?;
    let probe = Shape::ExistsValueAbove {
        f,
        region: region.clone(),
        t: Rational::zero(),
    };
    // quasi-continuity, or the weaker rational-extrema property it implies
    admit(&probe)?;
    let seed = f.eval(&Surd::from(p))?;
    bracket(&seed, k, fuel, |t| {
        decide(&QuantQuery::new(
            Shape::ExistsValueAbove {
                f,
                region: region.clone(),
                t: t.clone(),
            },
            fuel,
        ))
    })
}

/// `inf f` on `[p,q]` to within `2^-k`, for usco `f`.
pub fn inf_usco(
    f: &SymbolicFn,
    p: &Rational,
    q: &Rational,
    k: Precision,
    fuel: u64,
) -> Result<DyadicInterval, AbyssError> {
    let region = closed_region(p, q)?;
    let probe = Shape::ExistsValueBelow {
        f,
        region: region.clone(),
        t: Rational::zero(),
    };
    require(
        f,
        ClassSet::USCO | ClassSet::BOUNDED_BELOW,
        "upper semi-continuous and bounded below",
        probe,
    )?;
    let seed = -f.eval(&Surd::from(p))?;
    // -inf f > t  iff  some value is below -t
    let i = bracket(&seed, k, fuel, |t| {
        decide(&QuantQuery::new(
            Shape::ExistsValueBelow {
                f,
                region: region.clone(),
                t: -t.clone(),
            },
            fuel,
        ))
    })?;
    Ok(negate(i))
}

/// `sup` of a limit given by a sequence with a convergence modulus.
pub fn sup_baire1(
    f: &SymbolicFn,
    p: &Rational,
    q: &Rational,
    k: Precision,
    fuel: u64,
) -> Result<DyadicInterval, AbyssError> {
    let region = closed_region(p, q)?;
    admit(&Shape::Baire1Above {
        f,
        region: region.clone(),
        t: Rational::zero(),
    })?;
    let seed = f.eval(&Surd::from(p))?;
    bracket(&seed, k, fuel, |t| {
        decide(&QuantQuery::new(
            Shape::Baire1Above {
                f,
                region: region.clone(),
                t: t.clone(),
            },
            fuel,
        ))
    })
}

/// `osc_f(x)` to within `2^-k`: `osc_f(x) < t` exactly when some ball around
/// `x` has oscillation below `t`.
pub fn osc_point(
    f: &SymbolicFn,
    x: &Surd,
    k: Precision,
    fuel: u64,
) -> Result<DyadicInterval, AbyssError> {
    check_point(x)?;
    admit(&Shape::osc_below(f, x.clone(), 0))?;
    let i = bracket(&Surd::zero(), k, fuel.max(k.0 as u64 + 8), |t| {
        if !t.is_positive() {
            return Ok(FueledBool::yes(0));
        }
        let r = decide(&QuantQuery::new(
            Shape::OscBelow {
                f,
                x: x.clone(),
                bound: t.clone(),
            },
            fuel,
        ))?;
        Ok(FueledBool {
            value: not(r.value),
            fuel_spent: r.fuel_spent,
        })
    })?;
    Ok(i)
}

fn not(t: Truth) -> Truth {
    match t {
        Truth::Yes => Truth::No,
        Truth::No => Truth::Yes,
        Truth::Unknown => Truth::Unknown,
    }
}

pub(crate) fn check_point(x: &Surd) -> Result<(), AbyssError> {
    if x.is_negative() || x > &Surd::one() {
        return Err(AbyssError::Domain(format!("{x} is outside [0,1]")));
    }
    Ok(())
}

/// Whether `osc_f(x) = 0`: `No` as soon as some `2^-m`, `m <= fuel`, is not
/// beaten by any ball; `Yes` when every such level is beaten and the
/// symbolic oscillation is zero.
pub fn is_continuous_at(f: &SymbolicFn, x: &Surd, fuel: u64) -> Result<FueledBool, AbyssError> {
    check_point(x)?;
    admit(&Shape::osc_below(f, x.clone(), 0))?;
    let mut spent = 0;
    for m in 0..=fuel.min(u32::MAX as u64) as u32 {
        let r = decide(&QuantQuery::new(Shape::osc_below(f, x.clone(), m), fuel))?;
        spent += r.fuel_spent;
        match r.value {
            Truth::Yes => {}
            Truth::No => return Ok(FueledBool::no(spent)),
            Truth::Unknown => return Ok(FueledBool::unknown(spent)),
        }
    }
    Ok(if f.osc(x)?.is_zero() {
        FueledBool::yes(spent)
    } else {
        FueledBool::unknown(spent)
    })
}

/// Whether `osc_f(x) < 2^-k`, decided by one oscillation query.
pub fn certify_osc(f: &SymbolicFn, x: &Surd, k: u32, fuel: u64) -> Result<FueledBool, AbyssError> {
    decide(&QuantQuery::new(Shape::osc_below(f, x.clone(), k), fuel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::{CountableSet, Piecewise, Policy};
    use crate::DEFAULT_FUEL as FUEL;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn thomae_sup() {
        let i = sup_qc(&SymbolicFn::Thomae, &q(1, 4), &q(3, 4), Precision(10), FUEL).unwrap();
        assert!(i.contains_rational(&q(1, 2)), "{i:?}");
        assert!(i.width() <= Rational::pow2_neg(10));
        let i = sup_qc(&SymbolicFn::Thomae, &q(0, 1), &q(1, 1), Precision(10), FUEL).unwrap();
        assert!(i.contains_rational(&q(1, 1)));
    }

    #[test]
    fn constant_sup() {
        let i = sup_qc(
            &SymbolicFn::constant(q(1, 3)),
            &q(0, 1),
            &q(1, 1),
            Precision(20),
            FUEL,
        )
        .unwrap();
        assert!(i.contains_rational(&q(1, 3)));
        assert_eq!(i.width(), Rational::pow2_neg(20));
    }

    #[test]
    fn usco_inf_and_refusal() {
        let penny = SymbolicFn::penny(CountableSet::canonical());
        let i = inf_usco(&penny, &q(0, 1), &q(1, 1), Precision(8), FUEL).unwrap();
        assert!(i.contains_rational(&q(0, 1)));
        let flipped = SymbolicFn::difference(SymbolicFn::constant(q(1, 1)), penny);
        assert!(matches!(
            inf_usco(&flipped, &q(0, 1), &q(1, 1), Precision(8), FUEL),
            Err(AbyssError::Refused { .. })
        ));
    }

    #[test]
    fn thomae_oscillation() {
        let i = osc_point(
            &SymbolicFn::Thomae,
            &Surd::from(q(1, 2)),
            Precision(8),
            FUEL,
        )
        .unwrap();
        assert!(i.contains_rational(&q(1, 2)));
        let i = osc_point(
            &SymbolicFn::Thomae,
            &Surd::sqrt_half_scaled(0),
            Precision(8),
            FUEL,
        )
        .unwrap();
        assert!(i.contains_rational(&q(0, 1)));
    }

    #[test]
    fn continuity_decisions() {
        let penny = SymbolicFn::penny(CountableSet::canonical());
        assert_eq!(
            is_continuous_at(&penny, &Surd::sqrt_half_scaled(0), 64)
                .unwrap()
                .value,
            Truth::No
        );
        assert_eq!(
            is_continuous_at(&penny, &Surd::from(q(1, 3)), 64)
                .unwrap()
                .value,
            Truth::Yes
        );
        assert_eq!(
            is_continuous_at(&SymbolicFn::Thomae, &Surd::from(q(2, 3)), 64)
                .unwrap()
                .value,
            Truth::No
        );
        let step = SymbolicFn::Piecewise(
            Piecewise::step(
                Surd::from(q(1, 2)),
                Surd::zero(),
                Surd::one(),
                Policy::Right,
            )
            .unwrap(),
        );
        assert_eq!(
            is_continuous_at(&step, &Surd::from(q(1, 2)), 64)
                .unwrap()
                .value,
            Truth::No
        );
    }
}
