//! Simulated least-number search over the handful of query shapes that the
//! algorithms issue. Every real quantifier is first rewritten to one over
//! rationals; the rewrite is only allowed when the function's class makes it
//! sound, and the query is refused otherwise.

mod rules;

pub use rules::{collapse_rule, rule_for, CollapseRule, ShapeKind, RULES};

use crate::error::AbyssError;
use crate::exact::{FueledBool, Rational, Surd};
use crate::universe::{ClassSet, Region, SymbolicFn, View};

/// One query shape with its parameters.
#[derive(Clone, Debug)]
pub enum Shape<'a> {
    /// `(∃N)` oscillation of `f` on `B(x, 2^-N)` is below `bound`.
    OscBelow {
        f: &'a SymbolicFn,
        x: Surd,
        bound: Rational,
    },
    /// `(∃N)(∀y ∈ B(x, 2^-N)) f(y) >= q`: the ball is not reached by the
    /// sublevel set `{f < q}`.
    ValueBelowOnBall {
        f: &'a SymbolicFn,
        x: Surd,
        q: Rational,
    },
    /// `(∃x ∈ region) f(x) > t`.
    ExistsValueAbove {
        f: &'a SymbolicFn,
        region: Region,
        t: Rational,
    },
    /// `(∃x ∈ region) f(x) < t`.
    ExistsValueBelow {
        f: &'a SymbolicFn,
        region: Region,
        t: Rational,
    },
    /// `(∃x ∈ region) f(x) > t` for a limit given by its sequence.
    Baire1Above {
        f: &'a SymbolicFn,
        region: Region,
        t: Rational,
    },
}

impl<'a> Shape<'a> {
    pub fn osc_below(f: &'a SymbolicFn, x: Surd, m: u32) -> Self {
        Shape::OscBelow {
            f,
            x,
            bound: Rational::pow2_neg(m),
        }
    }

    pub fn kind(&self) -> ShapeKind {
        match self {
            Shape::OscBelow { .. } => ShapeKind::OscBelow,
            Shape::ValueBelowOnBall { .. } => ShapeKind::ValueBelowOnBall,
            Shape::ExistsValueAbove { .. } => ShapeKind::ExistsValueAbove,
            Shape::ExistsValueBelow { .. } => ShapeKind::ExistsValueBelow,
            Shape::Baire1Above { .. } => ShapeKind::Baire1Above,
        }
    }

    pub fn function(&self) -> &'a SymbolicFn {
        match self {
            Shape::OscBelow { f, .. }
            | Shape::ValueBelowOnBall { f, .. }
            | Shape::ExistsValueAbove { f, .. }
            | Shape::ExistsValueBelow { f, .. }
            | Shape::Baire1Above { f, .. } => f,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuantQuery<'a> {
    pub shape: Shape<'a>,
    pub fuel: u64,
}

impl<'a> QuantQuery<'a> {
    pub fn new(shape: Shape<'a>, fuel: u64) -> Self {
        QuantQuery { shape, fuel }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuWitness {
    pub value: u64,
    pub minimal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuResult {
    Found(MuWitness),
    NotFoundBelow(u64),
}

impl MuResult {
    pub fn found(&self) -> Option<u64> {
        match self {
            MuResult::Found(w) => Some(w.value),
            MuResult::NotFoundBelow(_) => None,
        }
    }
}

/// Which form of a query to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The rational form licensed by the collapse rule.
    Collapsed,
    /// Every real point, except set members with index above the fuel.
    Symbolic,
}

/// Checks that every closed end of a region is rational; the collapse rules
/// speak about open balls and rational intervals only.
fn check_region(r: &Region) -> Result<(), AbyssError> {
    let bad = (!r.lo_open && !r.lo.is_rational()) || (!r.hi_open && !r.hi.is_rational());
    if bad {
        return Err(AbyssError::Domain(format!(
            "query region {r:?} has an irrational closed end"
        )));
    }
    Ok(())
}

/// The rule that licenses `shape` for this function, or a refusal.
pub fn admit(shape: &Shape<'_>) -> Result<&'static CollapseRule, AbyssError> {
    let f = shape.function();
    if let Shape::Baire1Above { .. } = shape {
        return match f {
            SymbolicFn::Baire1 {
                with_modulus: true, ..
            } => Ok(rule_for(ShapeKind::Baire1Above, ClassSet::BAIRE1)?),
            SymbolicFn::Baire1 { .. } => Err(AbyssError::RepresentationInsufficient(
                "the sequence was supplied without a convergence modulus".into(),
            )),
            _ => Err(AbyssError::RepresentationInsufficient(
                "the function carries no sequence representation".into(),
            )),
        };
    }
    rule_for(shape.kind(), f.tags())
}

fn view_for(mode: Mode, fuel: u64) -> View {
    match mode {
        Mode::Collapsed => View::Rational,
        Mode::Symbolic => View::Probed(fuel),
    }
}

fn fmt_opt(v: &Option<Surd>) -> String {
    v.as_ref().map_or_else(|| "-".into(), |s| s.to_string())
}

/// Ball extremes in a mode, with the centre value added in symbolic mode.
fn ball_extremes(
    f: &SymbolicFn,
    x: &Surd,
    n: u32,
    mode: Mode,
    fuel: u64,
) -> Result<Option<(Surd, Surd)>, AbyssError> {
    let ball = Region::ball(x, n);
    let e = f.extremes(&ball, view_for(mode, fuel))?;
    if mode == Mode::Collapsed {
        return Ok(e);
    }
    let fx = match f {
        SymbolicFn::Baire1 { seq, .. } => seq.limit().eval(x)?,
        _ => f.eval(x)?,
    };
    Ok(Some(match e {
        Some((s, i)) => (s.max(fx.clone()), i.min(fx)),
        None => (fx.clone(), fx),
    }))
}

/// The least `N <= fuel` satisfying a ball shape in the given mode.
fn ball_search(
    q: &QuantQuery<'_>,
    rule: &CollapseRule,
    mode: Mode,
    trace: &mut Vec<String>,
) -> Result<MuResult, AbyssError> {
    for n in 0..=q.fuel.min(u32::MAX as u64) {
        let n32 = n as u32;
        let holds = match &q.shape {
            Shape::OscBelow { f, x, bound } => {
                let e = ball_extremes(f, x, n32, mode, q.fuel)?;
                let osc = match (mode, rule.needs.contains(ClassSet::USCO)) {
                    // usco: the sup on small balls is f(x), the inf is rational
                    (Mode::Collapsed, true) => {
                        let fx = f.eval(x)?;
                        e.map(|(_, lo)| &fx - &lo)
                    }
                    _ => e.map(|(hi, lo)| &hi - &lo),
                };
                let osc = osc.unwrap_or_else(Surd::zero);
                trace.push(format!("osc_below N={n} osc={osc} bound={bound}"));
                osc < Surd::from(bound)
            }
            Shape::ValueBelowOnBall { f, x, q: level } => {
                let inf = ball_extremes(f, x, n32, mode, q.fuel)?.map(|(_, i)| i);
                trace.push(format!(
                    "value_below_on_ball N={n} inf={} q={level}",
                    fmt_opt(&inf)
                ));
                inf.is_none_or(|i| i >= Surd::from(level))
            }
            _ => unreachable!("ball shapes only"),
        };
        if holds {
            return Ok(MuResult::Found(MuWitness {
                value: n,
                minimal: true,
            }));
        }
    }
    Ok(MuResult::NotFoundBelow(q.fuel))
}

/// The least denominator `d <= fuel` of a rational in the region passing the
/// level test.
fn denominator_search(
    f: &SymbolicFn,
    region: &Region,
    fuel: u64,
    pass: impl Fn(&Surd) -> bool,
    trace: &mut Vec<String>,
) -> Result<MuResult, AbyssError> {
    for d in 1..=fuel.max(1) {
        let dq = Rational::integer(d as i64);
        let lo = region.lo.scale(&dq).floor();
        let hi = region.hi.scale(&dq).floor();
        let mut p = lo;
        let mut hits = 0u64;
        while p <= hi {
            let r = Rational::from_bigint(p.clone()) / dq.clone();
            let rs = Surd::from(&r);
            if r.denom() == dq.numer() && region.contains(&rs) {
                hits += 1;
                if pass(&f.eval(&rs)?) {
                    trace.push(format!("witness d={d} r={r}"));
                    return Ok(MuResult::Found(MuWitness {
                        value: d,
                        minimal: true,
                    }));
                }
            }
            p += 1;
        }
        trace.push(format!("denominator d={d} probes={hits}"));
    }
    Ok(MuResult::NotFoundBelow(fuel))
}

/// Least-number search on an admitted query: a ball radius exponent for the
/// ball shapes, a least denominator of a rational witness for the others.
pub fn mu_search(q: &QuantQuery<'_>) -> Result<MuResult, AbyssError> {
    mu_search_traced(q, &mut Vec::new())
}

pub fn mu_search_traced(
    q: &QuantQuery<'_>,
    trace: &mut Vec<String>,
) -> Result<MuResult, AbyssError> {
    let rule = admit(&q.shape)?;
    match &q.shape {
        Shape::OscBelow { .. } | Shape::ValueBelowOnBall { .. } => {
            ball_search(q, rule, Mode::Symbolic, trace)
        }
        Shape::ExistsValueAbove { f, region, t } | Shape::Baire1Above { f, region, t } => {
            check_region(region)?;
            let level = Surd::from(t);
            let g = match f {
                SymbolicFn::Baire1 { seq, .. } => seq.limit(),
                _ => (*f).clone(),
            };
            denominator_search(&g, region, q.fuel, |v| *v > level, trace)
        }
        Shape::ExistsValueBelow { f, region, t } => {
            check_region(region)?;
            let level = Surd::from(t);
            denominator_search(f, region, q.fuel, |v| *v < level, trace)
        }
    }
}

/// Evaluates an admitted query in a given mode. Ball shapes look for a
/// radius up to the fuel; the others are decided outright.
pub fn evaluate(
    q: &QuantQuery<'_>,
    mode: Mode,
    trace: &mut Vec<String>,
) -> Result<FueledBool, AbyssError> {
    let rule = admit(&q.shape)?;
    let view = view_for(mode, q.fuel);
    match &q.shape {
        Shape::OscBelow { f, x, bound } => {
            let r = ball_search(q, rule, mode, trace)?;
            Ok(match r {
                MuResult::Found(w) => FueledBool::yes(w.value + 1),
                // every ball contains x, so the exact oscillation bounds them all
                MuResult::NotFoundBelow(_) if f.osc(x)? >= Surd::from(bound) => {
                    FueledBool::no(q.fuel + 1)
                }
                MuResult::NotFoundBelow(_) => FueledBool::unknown(q.fuel + 1),
            })
        }
        Shape::ValueBelowOnBall { f, x, q: level } => {
            let r = ball_search(q, rule, mode, trace)?;
            // every ball meets {f < q} when f(x) or a one-sided liminf is below
            // q; piecewise functions also when a side creeps up to q from below
            let reached = match f.as_piecewise() {
                Some(p) => !p.stays_at_least(x, &Surd::from(level)),
                None => f.local(x)?.floor() < Surd::from(level),
            };
            Ok(match r {
                MuResult::Found(w) => FueledBool::yes(w.value + 1),
                MuResult::NotFoundBelow(_) if reached => FueledBool::no(q.fuel + 1),
                MuResult::NotFoundBelow(_) => FueledBool::unknown(q.fuel + 1),
            })
        }
        Shape::ExistsValueAbove { f, region, t } => {
            check_region(region)?;
            let sup = f.sup(region, view)?;
            trace.push(format!(
                "exists_above region={region:?} sup={} t={t}",
                fmt_opt(&sup)
            ));
            Ok(FueledBool::from_bool(
                sup.is_some_and(|s| s > Surd::from(t)),
                1,
            ))
        }
        Shape::ExistsValueBelow { f, region, t } => {
            check_region(region)?;
            let inf = f.inf(region, view)?;
            trace.push(format!(
                "exists_below region={region:?} inf={} t={t}",
                fmt_opt(&inf)
            ));
            Ok(FueledBool::from_bool(
                inf.is_some_and(|s| s < Surd::from(t)),
                1,
            ))
        }
        Shape::Baire1Above { f, region, t } => {
            check_region(region)?;
            let SymbolicFn::Baire1 { seq, .. } = f else {
                unreachable!("admitted")
            };
            let level = Surd::from(t);
            // rational points: the limit value is f_{m(r)}(r)
            let limit = seq.limit();
            let rational_sup = limit.sup(region, View::Rational)?;
            trace.push(format!(
                "baire1_above rational sup={} t={t}",
                fmt_opt(&rational_sup)
            ));
            if rational_sup.is_some_and(|s| s > level) {
                return Ok(FueledBool::yes(1));
            }
            // the rational form lists the anchors too, so both modes probe them
            let mut spent = 1;
            for (i, a) in seq.anchors(q.fuel) {
                if !region.contains(&a) {
                    continue;
                }
                spent += 1;
                let m = seq.settles_at(&a);
                let v = seq.stage(m, &a);
                trace.push(format!("baire1_above anchor {i} settles at {m} value {v}"));
                if v > level {
                    return Ok(FueledBool::yes(spent));
                }
            }
            Ok(FueledBool::no(spent))
        }
    }
}

/// The oracle's answer: the collapsed form, with set members up to the fuel
/// probed as well.
pub fn decide(q: &QuantQuery<'_>) -> Result<FueledBool, AbyssError> {
    evaluate(q, Mode::Symbolic, &mut Vec::new())
}

pub fn decide_traced(
    q: &QuantQuery<'_>,
    trace: &mut Vec<String>,
) -> Result<FueledBool, AbyssError> {
    evaluate(q, Mode::Symbolic, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Truth;
    use crate::universe::CountableSet;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn thomae_has_a_witness_above_one_half() {
        let f = SymbolicFn::Thomae;
        let query = QuantQuery::new(
            Shape::ExistsValueAbove {
                f: &f,
                region: Region::unit(),
                t: q(1, 2),
            },
            64,
        );
        assert_eq!(
            mu_search(&query).unwrap(),
            MuResult::Found(MuWitness {
                value: 1,
                minimal: true
            })
        );
        assert_eq!(decide(&query).unwrap().value, Truth::Yes);
    }

    #[test]
    fn constant_oscillation_is_found_at_zero() {
        let f = SymbolicFn::zero();
        let query = QuantQuery::new(Shape::osc_below(&f, Surd::from(q(1, 3)), 5), 64);
        assert_eq!(mu_search(&query).unwrap().found(), Some(0));
    }

    #[test]
    fn penny_refusals() {
        let f = SymbolicFn::penny(CountableSet::canonical());
        let above = QuantQuery::new(
            Shape::ExistsValueAbove {
                f: &f,
                region: Region::unit(),
                t: q(1, 4),
            },
            64,
        );
        assert!(matches!(decide(&above), Err(AbyssError::Refused { .. })));
        let below = QuantQuery::new(
            Shape::ExistsValueBelow {
                f: &f,
                region: Region::unit(),
                t: q(1, 4),
            },
            64,
        );
        assert_eq!(decide(&below).unwrap().value, Truth::Yes);
    }

    #[test]
    fn penny_oscillation_near_one_half() {
        // osc on B(1/2, 2^-N) drops below 1/8 once members 0..=2 are outside
        let f = SymbolicFn::penny(CountableSet::canonical());
        let query = QuantQuery::new(Shape::osc_below(&f, Surd::from(q(1, 2)), 3), 64);
        let n = mu_search(&query).unwrap().found().unwrap();
        let brute = (0..64u32)
            .find(|&n| {
                let ball = Region::ball(&Surd::from(q(1, 2)), n);
                let close = (0..3).any(|i| ball.contains(&Surd::sqrt_half_scaled(i)));
                !close
            })
            .unwrap();
        assert_eq!(n, brute as u64);
    }

    #[test]
    fn ball_stays_above_level() {
        // penny: near a non-member the values are 0, so A(x, q) holds only for q <= 0
        let f = SymbolicFn::penny(CountableSet::canonical());
        let x = Surd::from(q(1, 3));
        let low = QuantQuery::new(
            Shape::ValueBelowOnBall {
                f: &f,
                x: x.clone(),
                q: q(0, 1),
            },
            16,
        );
        assert_eq!(mu_search(&low).unwrap().found(), Some(0));
        let high = QuantQuery::new(
            Shape::ValueBelowOnBall {
                f: &f,
                x,
                q: q(1, 8),
            },
            16,
        );
        assert_eq!(decide(&high).unwrap().value, Truth::No);
        // a step up at 1/2: balls right of 1/2 stay at 1 once they avoid 1/2
        let step = SymbolicFn::Piecewise(
            crate::universe::Piecewise::step(
                Surd::from(q(1, 2)),
                Surd::zero(),
                Surd::one(),
                crate::universe::Policy::Right,
            )
            .unwrap(),
        );
        let query = QuantQuery::new(
            Shape::ValueBelowOnBall {
                f: &step,
                x: Surd::from(q(5, 8)),
                q: q(1, 2),
            },
            16,
        );
        assert_eq!(mu_search(&query).unwrap().found(), Some(3));
    }

    #[test]
    fn irrational_closed_ends_are_rejected() {
        let f = SymbolicFn::Thomae;
        let r = Region::closed(Surd::sqrt_half_scaled(1), Surd::one());
        let query = QuantQuery::new(
            Shape::ExistsValueAbove {
                f: &f,
                region: r,
                t: q(1, 2),
            },
            8,
        );
        assert!(matches!(decide(&query), Err(AbyssError::Domain(_))));
    }
}
