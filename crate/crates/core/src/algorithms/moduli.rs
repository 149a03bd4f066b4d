//! Moduli of continuity, quasi-continuity, semi-continuity and regulation.

use std::fmt;

use serde::Serialize;

use super::bisect::check_point;
use crate::error::AbyssError;
use crate::exact::{log2_ceil_inv, Rational, Surd, Truth};
use crate::oracle::{admit, decide, mu_search, QuantQuery, Shape};
use crate::universe::{ClassSet, CountableSet, Region, SymbolicFn, View};

fn refuse(op: &str, needs: &str) -> AbyssError {
    AbyssError::Refused {
        shape: op.into(),
        needs: needs.into(),
        anchor: "the operation is only defined for this class".into(),
    }
}

pub(crate) fn ceil_dyadic(x: &Surd, k: u32) -> Rational {
    -(-x).floor_dyadic(k)
}

/// Largest `2^-n` not above `d`, for `d > 0`.
pub(crate) fn dyadic_below(d: &Surd) -> Rational {
    Rational::pow2_neg(log2_ceil_inv(d))
}

/// One sampled row of a modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusSample {
    pub x: Surd,
    pub k: u32,
    pub value: u64,
}

/// `G(x, m)`: the least `N` such that `f` oscillates by less than `2^-m` on
/// `B(x, 2^-N)`.
#[derive(Clone, Debug)]
pub struct ContinuityModulus {
    f: SymbolicFn,
    fuel: u64,
}

pub fn modulus_continuity_qc(f: &SymbolicFn, fuel: u64) -> Result<ContinuityModulus, AbyssError> {
    admit(&Shape::osc_below(f, Surd::zero(), 0))?;
    if !f.tags().contains(ClassSet::RATIONAL_EXTREMA) {
        return Err(refuse("modulus_continuity", "quasi-continuous"));
    }
    Ok(ContinuityModulus { f: f.clone(), fuel })
}

impl ContinuityModulus {
    pub fn at(&self, x: &Surd, m: u32) -> Result<u64, AbyssError> {
        check_point(x)?;
        let q = QuantQuery::new(Shape::osc_below(&self.f, x.clone(), m), self.fuel);
        mu_search(&q)?
            .found()
            .ok_or(AbyssError::fuel(self.fuel + 1, None))
    }

    pub fn sample(&self, xs: &[Surd], ks: &[u32]) -> Result<Vec<ModulusSample>, AbyssError> {
        table(xs, ks, |x, k| self.at(x, k))
    }
}

fn table(
    xs: &[Surd],
    ks: &[u32],
    mut at: impl FnMut(&Surd, u32) -> Result<u64, AbyssError>,
) -> Result<Vec<ModulusSample>, AbyssError> {
    let mut out = Vec::new();
    for x in xs {
        for &k in ks {
            out.push(ModulusSample {
                x: x.clone(),
                k,
                value: at(x, k)?,
            });
        }
    }
    Ok(out)
}

/// An open rational interval `(c,d) ⊆ B(x, 2^-N)` on which `f` stays within
/// `2^-k` of `f(x)`.
pub fn modulus_qc(
    f: &SymbolicFn,
    x: &Surd,
    k: u32,
    n: u32,
    fuel: u64,
) -> Result<(Rational, Rational), AbyssError> {
    check_point(x)?;
    if !f.tags().contains(ClassSet::QUASI_CONTINUOUS) {
        return Err(refuse("modulus_qc", "quasi-continuous"));
    }
    let fx = f.eval(x)?;
    let eps = Rational::pow2_neg(k + 1);
    let top = ceil_dyadic(&fx.shift(&eps), k + 2);
    let bottom = -ceil_dyadic(&(-&fx).shift(&eps), k + 2);
    let fits = |c: &Rational, d: &Rational| -> Result<bool, AbyssError> {
        let region = Region::closed_q(c, d);
        let above = decide(&QuantQuery::new(
            Shape::ExistsValueAbove {
                f,
                region: region.clone(),
                t: top.clone(),
            },
            fuel,
        ))?;
        if above.value != Truth::No {
            return Ok(false);
        }
        let below = decide(&QuantQuery::new(
            Shape::ExistsValueBelow {
                f,
                region,
                t: bottom.clone(),
            },
            fuel,
        ))?;
        Ok(below.value == Truth::No)
    };
    let r = Rational::pow2_neg(n);
    let zero = Rational::zero();
    let one = Rational::one();
    if let Some(xq) = x.to_rational() {
        let (c, d) = (&xq - &r, &xq + &r);
        if fits(&c.clone().max(zero.clone()), &d.clone().min(one.clone()))? {
            return Ok((c, d));
        }
    }
    let lo = x.shift(&-r.clone());
    let hi = x.shift(&r);
    let mut budget = fuel.saturating_mul(16);
    for depth in n + 1..=n + 1 + fuel.min(64) as u32 {
        let w = Rational::pow2_neg(depth);
        let mut cands: Vec<(Surd, Rational)> = Vec::new();
        let first = lo.floor_dyadic(depth);
        let mut c = first;
        while Surd::from(&c) < hi {
            let d = &c + &w;
            let inside = Surd::from(&c) > lo && Surd::from(&d) < hi && !c.is_negative() && d <= one;
            if inside {
                let mid = Surd::from(c.midpoint(&d));
                cands.push(((&mid - x).abs(), c.clone()));
            }
            c = d;
        }
        cands.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, c) in cands {
            if budget == 0 {
                return Err(AbyssError::fuel(fuel.saturating_mul(16), None));
            }
            budget -= 1;
            let d = &c + &w;
            if fits(&c, &d)? {
                return Ok((c, d));
            }
        }
    }
    Err(AbyssError::fuel(fuel.saturating_mul(16), None))
}

type RadiusFn = dyn Fn(&Surd, u32) -> Result<Rational, AbyssError> + Send + Sync;

/// `Ψ(x, k)`: a radius with `f(y) < f(x) + 2^-k` on `B(x, Ψ(x, k))`.
pub struct UscoModulus {
    name: String,
    radius: Box<RadiusFn>,
}

impl fmt::Debug for UscoModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UscoModulus({})", self.name)
    }
}

impl UscoModulus {
    pub fn from_fn(
        name: &str,
        radius: impl Fn(&Surd, u32) -> Result<Rational, AbyssError> + Send + Sync + 'static,
    ) -> Self {
        UscoModulus {
            name: name.into(),
            radius: Box::new(radius),
        }
    }

    /// For a penny function: half the distance to the nearest member of
    /// index below `k`, other than `x`.
    pub fn penny(set: CountableSet) -> Self {
        UscoModulus::from_fn("penny", move |x, k| {
            let near = set
                .members_upto(k.saturating_sub(1) as u64)
                .into_iter()
                .filter(|(i, a)| (*i as u32) < k && a != x)
                .map(|(_, a)| (&a - x).abs())
                .min();
            Ok(match near {
                Some(d) => dyadic_below(&d.scale(&Rational::new(1, 2))),
                None => Rational::one(),
            })
        })
    }

    /// The least `N <= fuel` whose ball satisfies the bound, found from the
    /// symbolic description of `f`.
    pub fn searched(f: &SymbolicFn, fuel: u64) -> Self {
        let f = f.clone();
        UscoModulus::from_fn("searched", move |x, k| {
            let n = least_ball_below(&f, x, &Rational::pow2_neg(k), fuel)?;
            Ok(Rational::pow2_neg(n))
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self, x: &Surd, k: u32) -> Result<Rational, AbyssError> {
        let r = (self.radius)(x, k)?;
        if !r.is_positive() {
            return Err(AbyssError::InvalidModulus(format!(
                "radius {r} at ({x}, {k}) is not positive"
            )));
        }
        Ok(r)
    }
}

/// Least `N <= fuel` with `sup f < f(x) + gap` on `B(x, 2^-N)`, counting set
/// members up to index `fuel`.
fn least_ball_below(
    f: &SymbolicFn,
    x: &Surd,
    gap: &Rational,
    fuel: u64,
) -> Result<u32, AbyssError> {
    let fx = f.eval(x)?;
    let level = fx.shift(gap);
    for n in 0..=fuel.min(u32::MAX as u64) as u32 {
        let sup = f.sup(&Region::ball(x, n), View::Probed(fuel))?;
        if sup.is_none_or(|s| s < level) {
            return Ok(n);
        }
    }
    Err(AbyssError::fuel(fuel + 1, None))
}

/// `G₀(x, k)`: the least `N` with `f < f(x) + 2^-(k+1)` on `B(x, 2^-N)`.
/// For usco `f` it is a modulus of lower semi-continuity at continuity points.
pub fn lsco_modulus_on_cf(f: &SymbolicFn, x: &Surd, k: u32, fuel: u64) -> Result<u64, AbyssError> {
    check_point(x)?;
    if !f.tags().contains(ClassSet::USCO) {
        return Err(refuse("lsco_modulus_on_cf", "upper semi-continuous"));
    }
    Ok(least_ball_below(f, x, &Rational::pow2_neg(k + 1), fuel)? as u64)
}

/// `M(x, k)` with `|f(x±) - f(y)| < 2^-k` on the one-sided windows of
/// length `2^-(M+1)`.
#[derive(Clone, Debug)]
pub struct RegulationModulus {
    f: SymbolicFn,
    fuel: u64,
}

pub fn modulus_regulation(f: &SymbolicFn, fuel: u64) -> Result<RegulationModulus, AbyssError> {
    if !f.tags().contains(ClassSet::REGULATED) {
        return Err(refuse("modulus_regulation", "regulated"));
    }
    Ok(RegulationModulus { f: f.clone(), fuel })
}

impl RegulationModulus {
    pub fn at(&self, x: &Surd, k: u32) -> Result<u64, AbyssError> {
        check_point(x)?;
        for m in 0..=self.fuel.min(u32::MAX as u64) as u32 {
            if regulation_violation(&self.f, x, k, m, self.fuel)?.is_none() {
                return Ok(m as u64);
            }
        }
        Err(AbyssError::fuel(self.fuel + 1, None))
    }

    pub fn sample(&self, xs: &[Surd], ks: &[u32]) -> Result<Vec<ModulusSample>, AbyssError> {
        table(xs, ks, |x, k| self.at(x, k))
    }
}

/// Describes a failure of the one-sided bounds for `M(x, k) = m`, looking at
/// set members up to index `fuel`; `None` when both bounds hold.
pub fn regulation_violation(
    f: &SymbolicFn,
    x: &Surd,
    k: u32,
    m: u32,
    fuel: u64,
) -> Result<Option<String>, AbyssError> {
    let local = f.local(x)?;
    let eps = Surd::from(Rational::pow2_neg(k));
    let sides = [
        ("right", Region::right_of(x, m + 1), local.right),
        ("left", Region::left_of(x, m + 1), local.left),
    ];
    for (side, region, lim) in sides {
        if !region.is_proper() {
            continue;
        }
        let lim = lim
            .as_ref()
            .and_then(|s| s.limit().cloned())
            .ok_or_else(|| AbyssError::NotApplicable(format!("f has no {side} limit at {x}")))?;
        let Some((sup, inf)) = f.extremes(&region, View::Probed(fuel))? else {
            continue;
        };
        if &sup - &lim >= eps || &lim - &inf >= eps {
            return Ok(Some(format!(
                "on {region:?} the values reach [{inf}, {sup}], not within 2^-{k} of the {side} limit {lim}"
            )));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::{Piecewise, Policy};

    fn q(n: i64, d: i64) -> Surd {
        Surd::from(Rational::new(n, d))
    }

    #[test]
    fn thomae_modulus_avoids_small_denominators() {
        let g = modulus_continuity_qc(&SymbolicFn::Thomae, 64).unwrap();
        let x = Surd::sqrt_half_scaled(0);
        let n = g.at(&x, 3).unwrap() as u32;
        // brute force: least N whose ball holds no p/d with d <= 8
        let clear = |n: u32| {
            let ball = Region::ball(&x, n);
            (1..=8i64).all(|d| (0..=d).all(|p| !ball.contains(&q(p, d))))
        };
        let want = (0..64).find(|&n| clear(n)).unwrap();
        assert_eq!(n, want);
        assert_eq!(
            modulus_continuity_qc(&SymbolicFn::constant(Rational::new(1, 2)), 8)
                .unwrap()
                .at(&x, 9)
                .unwrap(),
            0
        );
    }

    #[test]
    fn qc_modulus_on_a_step() {
        let step = SymbolicFn::Piecewise(
            Piecewise::step(q(1, 2), Surd::zero(), Surd::one(), Policy::Right).unwrap(),
        );
        let (c, d) = modulus_qc(&step, &q(1, 2), 3, 2, 64).unwrap();
        assert!(c >= Rational::new(1, 4) && d <= Rational::new(3, 4));
        assert!(
            c >= Rational::new(1, 2),
            "({c}, {d}) must sit right of the jump"
        );
        let k = SymbolicFn::constant(Rational::new(1, 3));
        assert_eq!(
            modulus_qc(&k, &q(1, 3), 5, 4, 8).unwrap(),
            (
                Rational::new(1, 3) - Rational::pow2_neg(4),
                Rational::new(1, 3) + Rational::pow2_neg(4)
            )
        );
        assert!(modulus_qc(&SymbolicFn::Thomae, &q(1, 2), 2, 3, 8).is_err());
    }

    #[test]
    fn penny_usco_modulus_holds() {
        let set = CountableSet::canonical();
        let f = SymbolicFn::penny(set.clone());
        let psi = UscoModulus::penny(set);
        for x in [q(1, 3), Surd::sqrt_half_scaled(1), q(7, 10)] {
            for k in 0..6 {
                let r = psi.radius(&x, k).unwrap();
                let ball = Region::open(x.shift(&-r.clone()), x.shift(&r));
                let sup = f.sup(&ball, View::Full).unwrap().unwrap();
                assert!(sup < f.eval(&x).unwrap().shift(&Rational::pow2_neg(k)));
            }
        }
    }

    #[test]
    fn lsco_modulus_at_a_continuity_point() {
        let f = SymbolicFn::penny(CountableSet::canonical());
        let x = q(1, 3);
        let n = lsco_modulus_on_cf(&f, &x, 4, 64).unwrap() as u32;
        let clear =
            |n: u32| (0..=4).all(|i| !Region::ball(&x, n).contains(&Surd::sqrt_half_scaled(i)));
        assert_eq!(Some(n), (0..64).find(|&n| clear(n)));
        assert_eq!(
            lsco_modulus_on_cf(&SymbolicFn::zero(), &x, 9, 8).unwrap(),
            0
        );
    }

    #[test]
    fn regulation_moduli() {
        let id = modulus_regulation(&SymbolicFn::identity(), 64).unwrap();
        assert_eq!(id.at(&q(1, 3), 5).unwrap(), 5);
        let step = SymbolicFn::Piecewise(
            Piecewise::step(q(1, 2), Surd::zero(), Surd::one(), Policy::Right).unwrap(),
        );
        assert_eq!(
            modulus_regulation(&step, 64)
                .unwrap()
                .at(&q(1, 2), 7)
                .unwrap(),
            0
        );
        let penny = SymbolicFn::penny(CountableSet::canonical());
        let m = modulus_regulation(&penny, 64)
            .unwrap()
            .at(&q(1, 3), 5)
            .unwrap() as u32;
        let clear = |m: u32| {
            (0..=5).all(|i| {
                let a = Surd::sqrt_half_scaled(i);
                !Region::right_of(&q(1, 3), m + 1).contains(&a)
                    && !Region::left_of(&q(1, 3), m + 1).contains(&a)
            })
        };
        assert_eq!(Some(m), (0..64).find(|&m| clear(m)));
    }
}
