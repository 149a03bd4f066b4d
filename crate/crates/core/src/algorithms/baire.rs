//! Effective Baire category: nested closed intervals, each stage placed
//! inside a ball handed out by the representation of a dense open set.

use serde::Serialize;

use super::bisect::{certify_osc, inf_usco};
use super::moduli::UscoModulus;
use crate::error::AbyssError;
use crate::exact::{log2_ceil_inv, DyadicInterval, Precision, Rational, Surd, Truth};
use crate::oracle::{admit, mu_search, QuantQuery, Shape};
use crate::universe::{ClassSet, SymbolicFn};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NestedStage {
    pub level: u32,
    pub center: Rational,
    pub radius: Rational,
    pub interval: DyadicInterval,
    pub note: String,
}

/// A point with the nested intervals that produced it and a certificate
/// that the oscillation there is below `2^-precision`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityPoint {
    pub point: Rational,
    pub interval: DyadicInterval,
    pub precision: u32,
    pub certified: bool,
    pub stages: Vec<NestedStage>,
}

/// Rational candidates in the interior of `i`: the midpoint, then for each
/// finer dyadic grid the (at most eight) grid points nearest to it.
pub(crate) fn candidates(i: &DyadicInterval, max: usize) -> impl Iterator<Item = Rational> + '_ {
    let mid = i.midpoint();
    let d0 = if i.width().is_zero() {
        0
    } else {
        log2_ceil_inv(&Surd::from(i.width()))
    };
    let depths = if i.width().is_zero() {
        0..0
    } else {
        d0 + 1..d0 + 48
    };
    let grid = depths.flat_map(move |d| {
        let scale = Rational::from_bigint(num_bigint::BigInt::from(1) << d as usize);
        let base = (&i.midpoint() * &scale).floor();
        let mut near: Vec<Rational> = (-4i64..=4)
            .map(|o| Rational::dyadic(&base + o, d))
            .collect();
        let m = i.midpoint();
        near.sort_by(|a, b| (a - &m).abs().cmp(&(b - &m).abs()).then(a.cmp(b)));
        near.into_iter()
            .filter(|y| y > i.lower() && y < i.upper())
            .take(8)
    });
    let mut seen = vec![mid.clone()];
    std::iter::once(mid)
        .chain(grid.filter(move |y| {
            if seen.contains(y) {
                return false;
            }
            seen.push(y.clone());
            true
        }))
        .take(max)
}

/// Runs `levels` stages. At each stage `ball(level, y)` offers a radius
/// `r` with `B(y, r)` inside the level's open set, or `None` when `y` is
/// not known to lie in it. The next interval is the part of `[y - r', y + r']`
/// inside the current one, `r' = min(|I|/4, r/2)`. Afterwards the interval
/// is shrunk about its midpoint to width at most `2^-k`.
pub(crate) fn nested(
    levels: u32,
    k: u32,
    fuel: u64,
    mut ball: impl FnMut(u32, &Rational) -> Result<Option<(Rational, String)>, AbyssError>,
) -> Result<(DyadicInterval, Vec<NestedStage>), AbyssError> {
    let mut cur = DyadicInterval::unit();
    let mut stages = Vec::new();
    let max = (fuel as usize).max(8);
    let mut spent = 0u64;
    for level in 0..levels {
        let mut next = None;
        for y in candidates(&cur, max) {
            spent += 1;
            if let Some((r, note)) = ball(level, &y)? {
                let quarter = cur.width() * Rational::new(1, 4);
                let half_r = &r * &Rational::new(1, 2);
                let rr = quarter.min(half_r);
                let lo = (&y - &rr).max(cur.lower().clone());
                let hi = (&y + &rr).min(cur.upper().clone());
                let interval = DyadicInterval::new(lo, hi)?;
                stages.push(NestedStage {
                    level,
                    center: y,
                    radius: r,
                    interval: interval.clone(),
                    note,
                });
                next = Some(interval);
                break;
            }
        }
        match next {
            Some(i) => cur = i,
            None => return Err(AbyssError::fuel(spent, Some(cur))),
        }
    }
    let eps = Rational::pow2_neg(k);
    while cur.width() > eps {
        let mid = cur.midpoint();
        let quarter = cur.width() * Rational::new(1, 4);
        cur = DyadicInterval::new(&mid - &quarter, &mid + &quarter)?;
    }
    Ok((cur, stages))
}

fn refuse(op: &str, needs: &str) -> AbyssError {
    AbyssError::Refused {
        shape: op.into(),
        needs: needs.into(),
        anchor: "the operation is only defined for this class".into(),
    }
}

fn certified(f: &SymbolicFn, x: &Rational, k: u32, fuel: u64) -> Result<bool, AbyssError> {
    Ok(certify_osc(f, &Surd::from(x), k, fuel)?.value == Truth::Yes)
}

/// A point where a quasi-continuous `f` oscillates by less than `2^-k`.
/// Stage `m` works in `O_m`, the union of the balls `B(q, 2^-G(q, m))`.
pub fn point_of_continuity_qc(
    f: &SymbolicFn,
    k: u32,
    fuel: u64,
) -> Result<ContinuityPoint, AbyssError> {
    admit(&Shape::osc_below(f, Surd::zero(), 0))?;
    if !f.tags().contains(ClassSet::RATIONAL_EXTREMA) {
        return Err(refuse("point_of_continuity_qc", "quasi-continuous"));
    }
    let (interval, stages) = nested(k, k, fuel, |level, y| {
        let m = level + 1;
        let q = QuantQuery::new(Shape::osc_below(f, Surd::from(y), m), fuel);
        Ok(mu_search(&q)?
            .found()
            .map(|g| (Rational::pow2_neg(g as u32), format!("G(y, {m}) = {g}"))))
    })?;
    let point = interval.midpoint();
    let certified = certified(f, &point, k, fuel)?;
    Ok(ContinuityPoint {
        point,
        interval,
        precision: k,
        certified,
        stages,
    })
}

/// A point where a usco `f` oscillates by less than `2^-k`, working through
/// `O_q = {x : f(x) < q or A(x, q)}` for `q` on a grid of step `2^-k` from
/// below `inf f` up to `top`, a caller-supplied upper bound of `f`.
pub fn point_of_continuity_usco(
    f: &SymbolicFn,
    psi: &UscoModulus,
    top: &Rational,
    k: u32,
    fuel: u64,
) -> Result<ContinuityPoint, AbyssError> {
    admit(&Shape::ValueBelowOnBall {
        f,
        x: Surd::zero(),
        q: Rational::zero(),
    })?;
    if !f.tags().contains(ClassSet::USCO) {
        return Err(refuse("point_of_continuity_usco", "upper semi-continuous"));
    }
    let floor = inf_usco(f, &Rational::zero(), &Rational::one(), Precision(k), fuel)?
        .lower()
        .clone();
    let step = Rational::pow2_neg(k);
    let mut levels = Vec::new();
    let mut q = floor;
    while &q <= top {
        levels.push(q.clone());
        q = &q + &step;
    }
    let (interval, stages) = nested(levels.len() as u32, k, fuel, |level, y| {
        let q = &levels[level as usize];
        let ys = Surd::from(y);
        let fy = f.eval(&ys)?;
        let qs = Surd::from(q);
        if fy < qs {
            let k0 = log2_ceil_inv(&(&qs - &fy));
            let r = psi.radius(&ys, k0)?;
            return Ok(Some((r, format!("f(y) < {q}: modulus radius at k = {k0}"))));
        }
        let a = QuantQuery::new(
            Shape::ValueBelowOnBall {
                f,
                x: ys,
                q: q.clone(),
            },
            fuel,
        );
        Ok(mu_search(&a)?.found().map(|m| {
            (
                Rational::pow2_neg(m as u32),
                format!("A(y, {q}) with M = {m}"),
            )
        }))
    })?;
    let point = interval.midpoint();
    if f.eval(&Surd::from(&point))? > Surd::from(top) {
        return Err(AbyssError::Domain(format!(
            "f exceeds the supplied bound {top} at {point}"
        )));
    }
    let certified = certified(f, &point, k, fuel)?;
    Ok(ContinuityPoint {
        point,
        interval,
        precision: k,
        certified,
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::osc_point;
    use crate::universe::{ClosedSetRep, CountableSet};

    #[test]
    fn thomae_continuity_point() {
        let p = point_of_continuity_qc(&SymbolicFn::Thomae, 6, 64).unwrap();
        assert!(p.certified);
        // Thomae oscillates by 1/denominator at a rational
        assert!(p.point.denom() > &num_bigint::BigInt::from(64));
        let osc = osc_point(
            &SymbolicFn::Thomae,
            &Surd::from(&p.point),
            Precision(6),
            128,
        )
        .unwrap();
        assert!(osc.upper() <= &Rational::pow2_neg(6));
    }

    #[test]
    fn constant_gives_the_midpoint() {
        let p = point_of_continuity_qc(&SymbolicFn::constant(Rational::new(2, 7)), 5, 16).unwrap();
        assert_eq!(p.point, Rational::new(1, 2));
        let psi = UscoModulus::searched(&SymbolicFn::zero(), 16);
        let p =
            point_of_continuity_usco(&SymbolicFn::zero(), &psi, &Rational::zero(), 5, 16).unwrap();
        assert_eq!(p.point, Rational::new(1, 2));
    }

    #[test]
    fn penny_usco_continuity_point() {
        let set = CountableSet::canonical();
        let f = SymbolicFn::penny(set.clone());
        let p = point_of_continuity_usco(
            &f,
            &UscoModulus::penny(set.clone()),
            &Rational::new(1, 2),
            6,
            64,
        )
        .unwrap();
        assert!(p.certified);
        assert!(set.index_of(&Surd::from(&p.point)).is_none());
    }

    #[test]
    fn indicator_of_a_point() {
        let c = ClosedSetRep::FinitePointSet {
            points: vec![Surd::from(Rational::new(1, 2))],
        };
        let f = SymbolicFn::Indicator { closed: c };
        let psi = UscoModulus::searched(&f, 64);
        let p = point_of_continuity_usco(&f, &psi, &Rational::one(), 4, 64).unwrap();
        assert!(p.certified);
        assert_ne!(p.point, Rational::new(1, 2));
    }
}
