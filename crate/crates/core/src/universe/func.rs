//! The symbolic function universe.

use serde::{Deserialize, Serialize};

use super::closed::ClosedSetRep;
use super::piecewise::{Acc, Piecewise};
use super::region::{band, Region, View};
use super::seq::Baire1Seq;
use super::set::{CountableSet, Unbounded};
use super::tags::ClassSet;
use crate::error::AbyssError;
use crate::exact::{simplest_in, Rational, Surd};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolicFn {
    Piecewise(Piecewise),
    Thomae,
    /// `2^-(Y(x)+1)` on the set, 0 elsewhere.
    Penny {
        set: CountableSet,
    },
    /// The penny function restricted to members of index at most `k`.
    PennyK {
        set: CountableSet,
        k: u64,
    },
    /// The penny function over the companion set of `set`.
    TildePenny {
        set: CountableSet,
    },
    /// `2^-(n+5)` on the `n`-th companion member, 1/8 elsewhere; with `usco`
    /// the background drops to `2^-(n+6)` on band `n` instead.
    CoverPsi {
        set: CountableSet,
        #[serde(default)]
        usco: bool,
    },
    Indicator {
        closed: ClosedSetRep,
    },
    Baire1 {
        seq: Baire1Seq,
        #[serde(default)]
        with_modulus: bool,
    },
    Sum {
        left: Box<SymbolicFn>,
        right: Box<SymbolicFn>,
    },
    Difference {
        left: Box<SymbolicFn>,
        right: Box<SymbolicFn>,
    },
    Scale {
        factor: Rational,
        inner: Box<SymbolicFn>,
    },
}

/// Limit superior and inferior of `f(y)` as `y` approaches from one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideLimits {
    pub sup: Surd,
    pub inf: Surd,
}

impl SideLimits {
    fn exact(v: Surd) -> Self {
        SideLimits {
            sup: v.clone(),
            inf: v,
        }
    }

    /// The one-sided limit, if it exists.
    pub fn limit(&self) -> Option<&Surd> {
        (self.sup == self.inf).then_some(&self.sup)
    }
}

/// Behaviour of a function around a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Local {
    pub left: Option<SideLimits>,
    pub value: Surd,
    pub right: Option<SideLimits>,
}

impl Local {
    pub fn osc(&self) -> Surd {
        let mut hi = self.value.clone();
        let mut lo = self.value.clone();
        for s in self.left.iter().chain(self.right.iter()) {
            hi = hi.max(s.sup.clone());
            lo = lo.min(s.inf.clone());
        }
        &hi - &lo
    }

    /// `min(f(x), liminf from either side)`: the limit of infima over
    /// shrinking balls.
    pub fn floor(&self) -> Surd {
        self.left
            .iter()
            .chain(self.right.iter())
            .fold(self.value.clone(), |lo, s| lo.min(s.inf.clone()))
    }

    /// `max(f(x), limsup from either side)`.
    pub fn ceiling(&self) -> Surd {
        self.left
            .iter()
            .chain(self.right.iter())
            .fold(self.value.clone(), |hi, s| hi.max(s.sup.clone()))
    }

    fn scale(self, c: &Rational) -> Local {
        let neg = c.is_negative();
        let mv = |s: SideLimits| {
            let (a, b) = (s.sup.scale(c), s.inf.scale(c));
            if neg {
                SideLimits { sup: b, inf: a }
            } else {
                SideLimits { sup: a, inf: b }
            }
        };
        Local {
            left: self.left.map(mv),
            value: self.value.scale(c),
            right: self.right.map(mv),
        }
    }
}

fn pow2(n: u64) -> Surd {
    Surd::from(Rational::pow2_neg(n.min(u32::MAX as u64 - 8) as u32))
}

fn penny_value(n: u64) -> Surd {
    pow2(n + 1)
}

fn psi_value(n: u64) -> Surd {
    pow2(n + 5)
}

fn psi_background() -> Surd {
    Surd::from(Rational::new(1, 8))
}

/// Background of the usco cover function: `2^-(n+6)` on band `n`, 1/64 at 0.
fn psi_base(x: &Surd) -> Surd {
    if x.is_zero() {
        Surd::from(Rational::new(1, 64))
    } else {
        pow2(band(x) as u64 + 6)
    }
}

/// Limit of the usco background from the left of `x > 0`.
fn psi_base_left(x: &Surd) -> Surd {
    match x.to_rational().and_then(|q| q.inverse_power_of_two()) {
        Some(n) => pow2(n as u64 + 6),
        None => psi_base(x),
    }
}

/// The members a penny-like function reacts to: `set`, cut at `kcap`.
struct Spikes<'a> {
    set: &'a CountableSet,
    kcap: Option<u64>,
}

impl Spikes<'_> {
    fn index_of(&self, x: &Surd) -> Option<u64> {
        self.set
            .index_of(x)
            .filter(|i| self.kcap.is_none_or(|k| *i <= k))
    }

    fn cap(&self, view: View) -> Option<u64> {
        match (view.cap(), self.kcap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Visible members in `r`, ordered by index; only for finite sets.
    fn visible_finite(&self, r: &Region, view: View) -> Vec<(u64, Surd)> {
        self.set
            .members_in(r, self.kcap)
            .into_iter()
            .filter(|(i, p)| view.sees_member(*i, p))
            .collect()
    }

    fn first_visible(&self, r: &Region, view: View) -> Option<(u64, Surd)> {
        if self.set.is_finite() {
            return self.visible_finite(r, view).into_iter().next();
        }
        // infinite sets are all irrational
        if view == View::Rational {
            return None;
        }
        self.set.first_in(r, self.cap(view))
    }

    /// `Err` when infinitely many members are visible.
    fn last_visible(&self, r: &Region, view: View) -> Result<Option<(u64, Surd)>, Unbounded> {
        if self.set.is_finite() {
            return Ok(self.visible_finite(r, view).into_iter().last());
        }
        if view == View::Rational {
            return Ok(None);
        }
        self.set.last_in(r, self.cap(view))
    }
}

impl SymbolicFn {
    pub fn zero() -> Self {
        SymbolicFn::constant(Rational::zero())
    }

    pub fn constant(c: Rational) -> Self {
        SymbolicFn::Piecewise(Piecewise::constant(Surd::from(c)))
    }

    pub fn identity() -> Self {
        SymbolicFn::Piecewise(Piecewise::identity())
    }

    pub fn penny(set: CountableSet) -> Self {
        SymbolicFn::Penny { set }
    }

    pub fn sum(a: SymbolicFn, b: SymbolicFn) -> Self {
        SymbolicFn::Sum {
            left: Box::new(a),
            right: Box::new(b),
        }
    }

    pub fn difference(a: SymbolicFn, b: SymbolicFn) -> Self {
        SymbolicFn::Difference {
            left: Box::new(a),
            right: Box::new(b),
        }
    }

    pub fn scaled(factor: Rational, f: SymbolicFn) -> Self {
        SymbolicFn::Scale {
            factor,
            inner: Box::new(f),
        }
    }

    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self, AbyssError> {
        let f: SymbolicFn =
            serde_json::from_str(text).map_err(|e| AbyssError::Parse(e.to_string()))?;
        f.validate()?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    pub fn validate(&self) -> Result<(), AbyssError> {
        match self {
            SymbolicFn::Piecewise(p) => p.validate(),
            SymbolicFn::Thomae => Ok(()),
            SymbolicFn::Penny { set } | SymbolicFn::PennyK { set, .. } => {
                set.validate()?;
                if set.is_empty() {
                    return Err(AbyssError::Constructor(
                        "penny function over an empty set".into(),
                    ));
                }
                Ok(())
            }
            SymbolicFn::TildePenny { set } | SymbolicFn::CoverPsi { set, .. } => {
                CountableSet::tilde(set.clone())?;
                if set.is_empty() {
                    return Err(AbyssError::Constructor("companion of an empty set".into()));
                }
                Ok(())
            }
            SymbolicFn::Indicator { closed } => closed.validate(),
            SymbolicFn::Baire1 { seq, .. } => seq.validate(),
            SymbolicFn::Sum { left, right } | SymbolicFn::Difference { left, right } => {
                left.validate()?;
                right.validate()
            }
            SymbolicFn::Scale { inner, .. } => inner.validate(),
        }
    }

    fn spikes(&self) -> Option<(Spikes<'_>, bool)> {
        match self {
            SymbolicFn::Penny { set } => Some((Spikes { set, kcap: None }, false)),
            SymbolicFn::PennyK { set, k } => Some((
                Spikes {
                    set,
                    kcap: Some(*k),
                },
                false,
            )),
            _ => None,
        }
    }

    /// The companion set for the functions built over one.
    pub fn companion(&self) -> Option<CountableSet> {
        match self {
            SymbolicFn::TildePenny { set } | SymbolicFn::CoverPsi { set, .. } => {
                Some(CountableSet::Tilde {
                    base: Box::new(set.clone()),
                })
            }
            _ => None,
        }
    }

    /// The set whose members carry special values, if any.
    pub fn special_set(&self) -> Option<CountableSet> {
        match self {
            SymbolicFn::Penny { set } => Some(set.clone()),
            SymbolicFn::PennyK { set, k } => Some(CountableSet::Finite {
                members: set
                    .members_upto(*k)
                    .into_iter()
                    .map(|(index, point)| super::set::Member { index, point })
                    .collect(),
            }),
            SymbolicFn::TildePenny { .. } | SymbolicFn::CoverPsi { .. } => self.companion(),
            SymbolicFn::Baire1 { seq, .. } => seq.limit().special_set(),
            _ => None,
        }
    }

    /// Points that an exhaustive symbolic search should visit beyond a
    /// rational grid: set members up to `cap` and breakpoints.
    pub fn special_points(&self, cap: u64) -> Vec<Surd> {
        let mut out = match self {
            SymbolicFn::Piecewise(p) => p.knots(),
            SymbolicFn::Indicator { closed } => closed.indicator().knots(),
            SymbolicFn::Sum { left, right } | SymbolicFn::Difference { left, right } => {
                let mut v = left.special_points(cap);
                v.extend(right.special_points(cap));
                v
            }
            SymbolicFn::Scale { inner, .. } => inner.special_points(cap),
            SymbolicFn::Baire1 { seq, .. } => seq.limit().special_points(cap),
            _ => Vec::new(),
        };
        if let Some(set) = self.special_set() {
            out.extend(set.members_upto(cap).into_iter().map(|(_, p)| p));
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn eval(&self, x: &Surd) -> Result<Surd, AbyssError> {
        if x.is_negative() || *x > Surd::one() {
            return Err(AbyssError::Domain(format!("{x} lies outside [0,1]")));
        }
        Ok(match self {
            SymbolicFn::Piecewise(p) => p.eval(x),
            SymbolicFn::Thomae => match x.to_rational() {
                Some(q) => Surd::from(Rational::from_bigint(q.denom().clone()).recip()),
                None => Surd::zero(),
            },
            SymbolicFn::Penny { .. } | SymbolicFn::PennyK { .. } => {
                let (s, _) = self.spikes().expect("penny family");
                s.index_of(x).map_or_else(Surd::zero, penny_value)
            }
            SymbolicFn::TildePenny { .. } => {
                let t = self.companion().expect("companion");
                t.index_of(x).map_or_else(Surd::zero, penny_value)
            }
            SymbolicFn::CoverPsi { usco, .. } => {
                let t = self.companion().expect("companion");
                match t.index_of(x) {
                    Some(n) => psi_value(n),
                    None if *usco => psi_base(x),
                    None => psi_background(),
                }
            }
            SymbolicFn::Indicator { closed } => {
                if closed.contains(x) {
                    Surd::one()
                } else {
                    Surd::zero()
                }
            }
            SymbolicFn::Baire1 { seq, with_modulus } => {
                if !with_modulus {
                    return Err(AbyssError::NotEvaluable(
                        "a pointwise limit needs its convergence modulus to be evaluated".into(),
                    ));
                }
                seq.stage(seq.settles_at(x), x)
            }
            SymbolicFn::Sum { left, right } => &left.eval(x)? + &right.eval(x)?,
            SymbolicFn::Difference { left, right } => &left.eval(x)? - &right.eval(x)?,
            SymbolicFn::Scale { factor, inner } => inner.eval(x)?.scale(factor),
        })
    }

    /// Exact piecewise form, when the function has finitely many pieces.
    pub fn as_piecewise(&self) -> Option<Piecewise> {
        match self {
            SymbolicFn::Piecewise(p) => Some(p.clone()),
            SymbolicFn::Indicator { closed } => Some(closed.indicator()),
            SymbolicFn::Penny { .. }
            | SymbolicFn::PennyK { .. }
            | SymbolicFn::TildePenny { .. } => {
                let set = self.special_set()?;
                if !set.is_finite() {
                    return None;
                }
                let pts = set
                    .members_upto(u64::MAX)
                    .into_iter()
                    .map(|(i, p)| (p, penny_value(i)))
                    .collect();
                Piecewise::spikes(Surd::zero(), pts).ok()
            }
            SymbolicFn::CoverPsi { usco: false, .. } => {
                let set = self.companion()?;
                if !set.is_finite() {
                    return None;
                }
                let pts = set
                    .members_upto(u64::MAX)
                    .into_iter()
                    .map(|(i, p)| (p, psi_value(i)))
                    .collect();
                Piecewise::spikes(psi_background(), pts).ok()
            }
            SymbolicFn::Baire1 { seq, .. } => seq.limit().as_piecewise(),
            SymbolicFn::Sum { left, right } => {
                Some(left.as_piecewise()?.add(&right.as_piecewise()?))
            }
            SymbolicFn::Difference { left, right } => Some(
                left.as_piecewise()?
                    .add(&right.as_piecewise()?.scale(&-Rational::one())),
            ),
            SymbolicFn::Scale { factor, inner } => Some(inner.as_piecewise()?.scale(factor)),
            _ => None,
        }
    }

    /// The value when the function is constant.
    pub fn as_constant(&self) -> Option<Surd> {
        let p = self.as_piecewise()?;
        (p.breakpoints.is_empty() && p.pieces[0].slope.is_zero())
            .then(|| p.pieces[0].intercept.clone())
    }

    pub fn tags(&self) -> ClassSet {
        use ClassSet as C;
        let base = C::BOUNDED_BELOW;
        let t = match self {
            SymbolicFn::Piecewise(p) => p.tags(),
            SymbolicFn::Thomae => {
                C::CLIQUISH | C::USCO | C::REGULATED | C::BAIRE1 | C::RATIONAL_EXTREMA
            }
            SymbolicFn::Penny { .. }
            | SymbolicFn::PennyK { .. }
            | SymbolicFn::TildePenny { .. } => {
                let set = self.special_set().expect("penny family");
                let mut t = C::CLIQUISH | C::USCO | C::BV | C::REGULATED | C::BAIRE1;
                if set.is_finite() || set.has_band_property() {
                    t |= C::SIMPLY_CONTINUOUS;
                }
                if set.is_finite()
                    && set
                        .members_upto(u64::MAX)
                        .iter()
                        .all(|(_, p)| p.is_rational())
                {
                    t |= C::RATIONAL_EXTREMA;
                }
                t
            }
            SymbolicFn::CoverPsi { usco: false, .. } => {
                let mut t = C::CLIQUISH | C::BAIRE1 | C::POSITIVE;
                if self.companion().expect("companion").is_finite() {
                    t |= C::REGULATED | C::BV | C::LSCO;
                }
                t
            }
            SymbolicFn::CoverPsi { usco: true, .. } => {
                C::USCO | C::CLIQUISH | C::REGULATED | C::BAIRE1 | C::BV | C::POSITIVE
            }
            SymbolicFn::Indicator { closed } => closed.indicator().tags(),
            SymbolicFn::Baire1 { seq, .. } => seq.limit().tags() | C::BAIRE1,
            SymbolicFn::Sum { left, right } => match self.as_piecewise() {
                Some(p) => p.tags(),
                None => sum_tags(left, &left.tags(), right, &right.tags()),
            },
            SymbolicFn::Difference { left, right } => match self.as_piecewise() {
                Some(p) => p.tags(),
                None => {
                    let neg = negate_tags(right.tags());
                    sum_tags(left, &left.tags(), right, &neg)
                }
            },
            SymbolicFn::Scale { factor, inner } => {
                if factor.is_zero() {
                    C::CONTINUOUS | C::NORMALISED_BV
                } else if factor.is_negative() {
                    negate_tags(inner.tags())
                } else {
                    inner.tags()
                }
            }
        };
        (t | base).saturate()
    }

    /// `(sup, inf)` of `f` over the points of `r` visible in `view`;
    /// `Ok(None)` when no point is visible.
    pub fn extremes(&self, r: &Region, view: View) -> Result<Option<(Surd, Surd)>, AbyssError> {
        if r.is_empty() {
            return Ok(None);
        }
        if let Some(x) = r.as_point() {
            return self.point_extremes(x, view);
        }
        Ok(match self {
            SymbolicFn::Piecewise(p) => p.extremes(r, view),
            SymbolicFn::Thomae => {
                let q = simplest_in(&r.lo, r.lo_open, Some(&r.hi), r.hi_open)
                    .expect("proper region holds rationals");
                let top = Rational::from_bigint(q.denom().clone()).recip();
                Some((Surd::from(top), Surd::zero()))
            }
            SymbolicFn::Penny { .. } | SymbolicFn::PennyK { .. } => {
                let (s, _) = self.spikes().expect("penny family");
                spike_extremes(&s, r, view)
            }
            SymbolicFn::TildePenny { .. } => {
                let t = self.companion().expect("companion");
                spike_extremes(
                    &Spikes {
                        set: &t,
                        kcap: None,
                    },
                    r,
                    view,
                )
            }
            SymbolicFn::CoverPsi { usco: false, .. } => {
                let t = self.companion().expect("companion");
                let s = Spikes {
                    set: &t,
                    kcap: None,
                };
                let inf = match s.last_visible(r, view) {
                    Err(Unbounded) => Surd::zero(),
                    Ok(Some((n, _))) => psi_value(n),
                    Ok(None) => psi_background(),
                };
                Some((psi_background(), inf))
            }
            SymbolicFn::CoverPsi { usco: true, .. } => {
                let t = self.companion().expect("companion");
                let s = Spikes {
                    set: &t,
                    kcap: None,
                };
                let mut sup = if r.hi_open {
                    psi_base_left(&r.hi)
                } else {
                    psi_base(&r.hi)
                };
                if let Some((n, _)) = s.first_visible(r, view) {
                    sup = sup.max(psi_value(n));
                }
                let inf = if r.lo.is_zero() {
                    Surd::zero()
                } else {
                    psi_base(&r.lo)
                };
                Some((sup, inf))
            }
            SymbolicFn::Indicator { closed } => closed.indicator().extremes(r, view),
            SymbolicFn::Baire1 { seq, .. } => return seq.limit().extremes(r, view),
            SymbolicFn::Sum { .. } | SymbolicFn::Difference { .. } => {
                if let Some(p) = self.as_piecewise() {
                    return Ok(p.extremes(r, view));
                }
                let (l, rt, neg) = match self {
                    SymbolicFn::Sum { left, right } => (left, right, false),
                    SymbolicFn::Difference { left, right } => (left, right, true),
                    _ => unreachable!(),
                };
                if let Some(c) = rt.as_constant() {
                    let c = if neg { -c } else { c };
                    return Ok(l.extremes(r, view)?.map(|(a, b)| (&a + &c, &b + &c)));
                }
                if let Some(c) = l.as_constant() {
                    return Ok(rt.extremes(r, view)?.map(|(a, b)| {
                        if neg {
                            (&c - &b, &c - &a)
                        } else {
                            (&a + &c, &b + &c)
                        }
                    }));
                }
                return Err(AbyssError::Unsupported(
                    "extremes of a sum need piecewise operands or a constant summand".into(),
                ));
            }
            SymbolicFn::Scale { factor, inner } => {
                return Ok(inner.extremes(r, view)?.map(|(a, b)| {
                    let (a, b) = (a.scale(factor), b.scale(factor));
                    if factor.is_negative() {
                        (b, a)
                    } else {
                        (a, b)
                    }
                }))
            }
        })
    }

    fn point_extremes(&self, x: &Surd, view: View) -> Result<Option<(Surd, Surd)>, AbyssError> {
        let visible = match self.special_set().and_then(|s| s.index_of(x)) {
            Some(i) => view.sees_member(i, x),
            None => view.sees_point(x),
        };
        if !visible {
            return Ok(None);
        }
        let v = match self {
            // the limit, whether or not the modulus was supplied
            SymbolicFn::Baire1 { seq, .. } => seq.limit().eval(x)?,
            _ => self.eval(x)?,
        };
        Ok(Some((v.clone(), v)))
    }

    /// `sup` over `r` in `view`.
    pub fn sup(&self, r: &Region, view: View) -> Result<Option<Surd>, AbyssError> {
        Ok(self.extremes(r, view)?.map(|(s, _)| s))
    }

    pub fn inf(&self, r: &Region, view: View) -> Result<Option<Surd>, AbyssError> {
        Ok(self.extremes(r, view)?.map(|(_, i)| i))
    }

    /// One-sided limsup/liminf and the value at `x`.
    pub fn local(&self, x: &Surd) -> Result<Local, AbyssError> {
        let value = match self {
            SymbolicFn::Baire1 { seq, .. } => seq.limit().eval(x)?,
            _ => self.eval(x)?,
        };
        let has_left = x.is_positive();
        let has_right = *x < Surd::one();
        let both = |s: SideLimits| Local {
            left: has_left.then(|| s.clone()),
            value: value.clone(),
            right: has_right.then_some(s),
        };
        Ok(match self {
            SymbolicFn::Piecewise(_) | SymbolicFn::Indicator { .. } => {
                let p = self.as_piecewise().expect("piecewise");
                let (l, r) = p.side_limits(x);
                Local {
                    left: l.map(SideLimits::exact),
                    value,
                    right: r.map(SideLimits::exact),
                }
            }
            SymbolicFn::Thomae
            | SymbolicFn::Penny { .. }
            | SymbolicFn::PennyK { .. }
            | SymbolicFn::TildePenny { .. } => both(SideLimits::exact(Surd::zero())),
            SymbolicFn::CoverPsi { usco: false, .. } => {
                let infinite = !self.companion().expect("companion").is_finite();
                let mut l = both(SideLimits::exact(psi_background()));
                if x.is_zero() && infinite {
                    if let Some(r) = l.right.as_mut() {
                        r.inf = Surd::zero();
                    }
                }
                l
            }
            SymbolicFn::CoverPsi { usco: true, .. } => {
                let right = if x.is_zero() {
                    Surd::zero()
                } else {
                    psi_base(x)
                };
                Local {
                    left: has_left.then(|| SideLimits::exact(psi_base_left(x))),
                    value,
                    right: has_right.then(|| SideLimits::exact(right)),
                }
            }
            SymbolicFn::Baire1 { seq, .. } => seq.limit().local(x)?,
            SymbolicFn::Sum { left, right } | SymbolicFn::Difference { left, right } => {
                if let Some(p) = self.as_piecewise() {
                    let (l, r) = p.side_limits(x);
                    return Ok(Local {
                        left: l.map(SideLimits::exact),
                        value,
                        right: r.map(SideLimits::exact),
                    });
                }
                let neg = matches!(self, SymbolicFn::Difference { .. });
                let a = left.local(x)?;
                let mut b = right.local(x)?;
                if neg {
                    b = b.scale(&-Rational::one());
                }
                add_local(a, b)?
            }
            SymbolicFn::Scale { factor, inner } => inner.local(x)?.scale(factor),
        })
    }

    pub fn osc(&self, x: &Surd) -> Result<Surd, AbyssError> {
        Ok(self.local(x)?.osc())
    }
}

fn spike_extremes(s: &Spikes<'_>, r: &Region, view: View) -> Option<(Surd, Surd)> {
    let sup = s
        .first_visible(r, view)
        .map_or_else(Surd::zero, |(n, _)| penny_value(n));
    Some((sup, Surd::zero()))
}

/// Adds two local pictures; exact when on each side one of them has a limit.
fn add_local(a: Local, b: Local) -> Result<Local, AbyssError> {
    fn side(
        a: Option<SideLimits>,
        b: Option<SideLimits>,
    ) -> Result<Option<SideLimits>, AbyssError> {
        match (a, b) {
            (Some(a), Some(b)) => {
                if a.limit().is_some() || b.limit().is_some() {
                    Ok(Some(SideLimits {
                        sup: &a.sup + &b.sup,
                        inf: &a.inf + &b.inf,
                    }))
                } else {
                    Err(AbyssError::Unsupported(
                        "local limits of a sum of two oscillating terms".into(),
                    ))
                }
            }
            _ => Ok(None),
        }
    }
    Ok(Local {
        left: side(a.left, b.left)?,
        value: &a.value + &b.value,
        right: side(a.right, b.right)?,
    })
}

fn negate_tags(t: ClassSet) -> ClassSet {
    let mut out = t - (ClassSet::USCO | ClassSet::LSCO | ClassSet::POSITIVE);
    if t.contains(ClassSet::USCO) {
        out |= ClassSet::LSCO;
    }
    if t.contains(ClassSet::LSCO) {
        out |= ClassSet::USCO;
    }
    out
}

fn sum_tags(l: &SymbolicFn, lt: &ClassSet, r: &SymbolicFn, rt: &ClassSet) -> ClassSet {
    use ClassSet as C;
    let both = *lt
        & *rt
        & (C::CONTINUOUS
            | C::CLIQUISH
            | C::USCO
            | C::LSCO
            | C::BV
            | C::NORMALISED_BV
            | C::REGULATED
            | C::BAIRE1
            | C::POSITIVE
            | C::BOUNDED_BELOW);
    let mut t = both;
    let lc = lt.contains(C::CONTINUOUS);
    let rc = rt.contains(C::CONTINUOUS);
    if (lc && rt.contains(C::QUASI_CONTINUOUS)) || (rc && lt.contains(C::QUASI_CONTINUOUS)) {
        t |= C::QUASI_CONTINUOUS;
    }
    // a constant summand shifts values without moving them
    if l.as_constant().is_some() {
        t |= *rt & (C::RATIONAL_EXTREMA | C::SIMPLY_CONTINUOUS | C::QUASI_CONTINUOUS);
    }
    if r.as_constant().is_some() {
        t |= *lt & (C::RATIONAL_EXTREMA | C::SIMPLY_CONTINUOUS | C::QUASI_CONTINUOUS);
    }
    t
}

/// The penny function of `set`.
pub fn build_penny(set: CountableSet) -> Result<SymbolicFn, AbyssError> {
    let f = SymbolicFn::Penny { set };
    f.validate()?;
    Ok(f)
}

/// The companion set and the penny function over it.
pub fn build_tilde(set: CountableSet) -> Result<(CountableSet, SymbolicFn), AbyssError> {
    let t = CountableSet::tilde(set.clone())?;
    let f = SymbolicFn::TildePenny { set };
    f.validate()?;
    Ok((t, f))
}

pub fn build_cover_psi(set: CountableSet, usco: bool) -> Result<SymbolicFn, AbyssError> {
    let f = SymbolicFn::CoverPsi { set, usco };
    f.validate()?;
    Ok(f)
}

/// Checks `osc_f(x) = f(x)` for a penny function at its members and on a
/// dyadic grid.
pub fn osc_selfcheck(f: &SymbolicFn) -> Result<bool, AbyssError> {
    if !matches!(
        f,
        SymbolicFn::Penny { .. } | SymbolicFn::PennyK { .. } | SymbolicFn::TildePenny { .. }
    ) {
        return Err(AbyssError::NotApplicable(
            "the oscillation identity is stated for penny functions".into(),
        ));
    }
    let mut probes = f.special_points(64);
    probes.extend((0..=64).map(|j| Surd::from(Rational::new(j, 64))));
    for x in &probes {
        if f.osc(x)? != f.eval(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive `(sup, inf)` over a finite list of points.
pub fn extremes_over(f: &SymbolicFn, pts: &[Surd]) -> Result<Option<(Surd, Surd)>, AbyssError> {
    let mut acc = Acc::default();
    for p in pts {
        acc.push(f.eval(p)?);
    }
    Ok(acc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Surd {
        Surd::from(Rational::new(n, d))
    }

    fn canonical_penny() -> SymbolicFn {
        build_penny(CountableSet::canonical()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(SymbolicFn::Thomae.eval(&q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(SymbolicFn::Thomae.eval(&q(0, 1)).unwrap(), q(1, 1));
        assert_eq!(
            SymbolicFn::Thomae.eval(&Surd::sqrt_half_scaled(0)).unwrap(),
            q(0, 1)
        );
        let p = canonical_penny();
        assert_eq!(p.eval(&q(1, 2)).unwrap(), q(0, 1));
        assert_eq!(p.eval(&Surd::sqrt_half_scaled(0)).unwrap(), q(1, 2));
        assert_eq!(p.eval(&Surd::sqrt_half_scaled(1)).unwrap(), q(1, 4));
        assert!(matches!(p.eval(&q(3, 2)), Err(AbyssError::Domain(_))));
    }

    #[test]
    fn empty_penny_is_refused() {
        let empty = CountableSet::Finite { members: vec![] };
        assert!(build_penny(empty).is_err());
    }

    #[test]
    fn cover_psi_values() {
        let psi = build_cover_psi(CountableSet::canonical(), false).unwrap();
        assert_eq!(psi.eval(&q(3, 4)).unwrap(), q(1, 8));
        let u = build_cover_psi(CountableSet::canonical(), true).unwrap();
        assert_eq!(u.eval(&q(3, 5)).unwrap(), q(1, 64));
        let m = Surd::sqrt_half_scaled(0);
        assert_eq!(u.eval(&m).unwrap(), q(1, 32));
        assert!(psi.eval(&q(0, 1)).unwrap().is_positive());
    }

    #[test]
    fn penny_extremes_depend_on_view() {
        let p = canonical_penny();
        let unit = Region::unit();
        assert_eq!(p.sup(&unit, View::Rational).unwrap(), Some(q(0, 1)));
        assert_eq!(p.sup(&unit, View::Probed(0)).unwrap(), Some(q(1, 2)));
        let r = Region::closed(q(1, 10), q(1, 2));
        assert_eq!(p.sup(&r, View::Full).unwrap(), Some(q(1, 4)));
        assert_eq!(p.sup(&r, View::Probed(0)).unwrap(), Some(q(0, 1)));
    }

    #[test]
    fn thomae_extremes() {
        let r = Region::closed(q(1, 4), q(3, 4));
        assert_eq!(
            SymbolicFn::Thomae.extremes(&r, View::Rational).unwrap(),
            Some((q(1, 2), q(0, 1)))
        );
        let r = Region::open(q(1, 3), q(1, 2));
        assert_eq!(
            SymbolicFn::Thomae.sup(&r, View::Rational).unwrap(),
            Some(q(1, 5))
        );
    }

    #[test]
    fn oscillation_identity() {
        assert!(osc_selfcheck(&canonical_penny()).unwrap());
        let single =
            build_penny(CountableSet::finite(vec![Surd::sqrt_half_scaled(0)]).unwrap()).unwrap();
        assert!(osc_selfcheck(&single).unwrap());
        assert!(osc_selfcheck(&SymbolicFn::zero()).is_err());
    }

    #[test]
    fn tags_follow_the_families() {
        let p = canonical_penny().tags();
        assert!(
            p.contains(ClassSet::CLIQUISH | ClassSet::USCO | ClassSet::BV | ClassSet::REGULATED)
        );
        assert!(!p.contains(ClassSet::QUASI_CONTINUOUS));
        let d =
            SymbolicFn::difference(SymbolicFn::constant(Rational::one()), canonical_penny()).tags();
        assert!(!d.contains(ClassSet::USCO));
        assert!(d.contains(ClassSet::LSCO));
        let psi = build_cover_psi(CountableSet::canonical(), false)
            .unwrap()
            .tags();
        assert!(!psi.contains(ClassSet::QUASI_CONTINUOUS) && !psi.contains(ClassSet::LSCO));
        assert!(psi.contains(ClassSet::CLIQUISH | ClassSet::POSITIVE));
    }

    #[test]
    fn json_round_trip() {
        let fns = vec![
            canonical_penny(),
            SymbolicFn::Thomae,
            SymbolicFn::PennyK {
                set: CountableSet::canonical(),
                k: 3,
            },
            build_cover_psi(CountableSet::canonical_prefix(4), true).unwrap(),
            SymbolicFn::sum(SymbolicFn::identity(), SymbolicFn::Thomae),
        ];
        for f in fns {
            let back = SymbolicFn::from_json(&f.to_json()).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn local_limits() {
        let psi = build_cover_psi(CountableSet::canonical(), false).unwrap();
        let l = psi.local(&Surd::zero()).unwrap();
        assert_eq!(l.right.unwrap().inf, q(0, 1));
        let u = build_cover_psi(CountableSet::canonical(), true).unwrap();
        let l = u.local(&q(1, 2)).unwrap();
        assert_eq!(l.left.unwrap().sup, q(1, 128));
        assert_eq!(l.value, q(1, 64));
    }
}
