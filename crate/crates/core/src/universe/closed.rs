//! Open sets with a radius function, and closed sets built from them.

use serde::{Deserialize, Serialize};

use super::piecewise::{Affine, Breakpoint, Piecewise, Policy};
use crate::error::AbyssError;
use crate::exact::{log2_ceil_inv, Rational, Surd};

/// A finite union of open rational intervals, with the radius map
/// `x -> 2^-N`, `N` least such that `2^-N` is at most half the distance from
/// `x` to the boundary of its component. Intervals may poke out of [0,1].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawOpenUnion")]
pub struct OpenUnion {
    intervals: Vec<(Rational, Rational)>,
}

#[derive(Deserialize)]
struct RawOpenUnion {
    intervals: Vec<(Rational, Rational)>,
}

impl TryFrom<RawOpenUnion> for OpenUnion {
    type Error = AbyssError;

    fn try_from(raw: RawOpenUnion) -> Result<Self, AbyssError> {
        OpenUnion::new(raw.intervals)
    }
}

impl OpenUnion {
    /// Sorts and merges overlapping intervals. A shared endpoint is not an
    /// overlap: `(a,b) ∪ (b,c)` still misses `b`.
    pub fn new(mut intervals: Vec<(Rational, Rational)>) -> Result<Self, AbyssError> {
        for (a, b) in &intervals {
            if a >= b {
                return Err(AbyssError::Constructor(format!(
                    "empty interval ({a}, {b})"
                )));
            }
        }
        intervals.sort();
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (a, b) in intervals {
            match merged.last_mut() {
                Some((_, hi)) if a < *hi => {
                    if b > *hi {
                        *hi = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        Ok(OpenUnion { intervals: merged })
    }

    pub fn empty() -> Self {
        OpenUnion {
            intervals: Vec::new(),
        }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn component(&self, x: &Surd) -> Option<&(Rational, Rational)> {
        self.intervals
            .iter()
            .find(|(a, b)| &Surd::from(a) < x && x < &Surd::from(b))
    }

    pub fn contains(&self, x: &Surd) -> bool {
        self.component(x).is_some()
    }

    /// Distance from `x` to the complement, zero outside.
    pub fn depth(&self, x: &Surd) -> Surd {
        match self.component(x) {
            Some((a, b)) => (x - &Surd::from(a)).min(&Surd::from(b) - x),
            None => Surd::zero(),
        }
    }

    /// The R2 radius; `None` outside the set.
    pub fn radius(&self, x: &Surd) -> Option<Rational> {
        let d = self.depth(x);
        d.is_positive()
            .then(|| Rational::pow2_neg(log2_ceil_inv(&d) + 1))
    }

    /// No point of [0,1] is inside.
    pub fn is_empty_in_unit(&self) -> bool {
        self.intervals
            .iter()
            .all(|(a, b)| *b <= Rational::zero() || *a >= Rational::one())
    }

    /// Covers all of [0,1].
    pub fn covers_unit(&self) -> bool {
        self.intervals
            .iter()
            .any(|(a, b)| *a < Rational::zero() && *b > Rational::one())
    }

    pub fn union(&self, other: &OpenUnion) -> OpenUnion {
        let all = self
            .intervals
            .iter()
            .chain(other.intervals.iter())
            .cloned()
            .collect();
        OpenUnion::new(all).expect("inputs already valid")
    }

    /// `1` on the set, `0` off it, as a piecewise function on [0,1].
    pub fn indicator(&self) -> Piecewise {
        self.two_valued(Surd::one(), Surd::zero())
    }

    fn two_valued(&self, inside: Surd, outside: Surd) -> Piecewise {
        let zero = Rational::zero();
        let one = Rational::one();
        let mut cuts: Vec<Rational> = Vec::new();
        for (a, b) in &self.intervals {
            for c in [a, b] {
                if *c >= zero && *c <= one {
                    cuts.push(c.clone());
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        let breakpoints: Vec<Breakpoint> = cuts
            .iter()
            .map(|c| {
                let v = if self.contains(&Surd::from(c)) {
                    inside.clone()
                } else {
                    outside.clone()
                };
                Breakpoint {
                    at: Surd::from(c),
                    policy: Policy::Value(v),
                }
            })
            .collect();
        let mut knots = vec![zero.clone()];
        knots.extend(cuts.iter().filter(|c| **c != zero && **c != one).cloned());
        knots.push(one);
        let pieces = knots
            .windows(2)
            .map(|w| {
                let mid = Surd::from(w[0].midpoint(&w[1]));
                Affine::constant(if self.contains(&mid) {
                    inside.clone()
                } else {
                    outside.clone()
                })
            })
            .collect();
        Piecewise::new(breakpoints, pieces).expect("cuts are sorted and distinct")
    }

    /// Stage `n` of the continuous ramp approximation of the indicator:
    /// `min(1, 2^n * depth(x))`.
    pub fn ramp(&self, n: u32, x: &Surd) -> Surd {
        let scaled = self.depth(x).scale(&Rational::dyadic(1u64 << n.min(62), 0));
        scaled.min(Surd::one())
    }

    /// Least `N` with `ramp(n, x) = indicator(x)` for every `n >= N`.
    pub fn ramp_settles_at(&self, x: &Surd) -> u64 {
        let d = self.depth(x);
        if d.is_positive() {
            log2_ceil_inv(&d) as u64
        } else {
            0
        }
    }

    /// The stage-`n` ramp as a piecewise function.
    pub fn ramp_piecewise(&self, n: u32) -> Piecewise {
        let h = Rational::pow2_neg(n);
        let scale = Rational::dyadic(1u64 << n.min(62), 0);
        let mut pieces_out: Vec<(Rational, Rational, Affine)> = Vec::new();
        for (a, b) in &self.intervals {
            let half = (b - a) * Rational::new(1, 2);
            let rise = if h < half { h.clone() } else { half.clone() };
            let top = &rise * &scale;
            // up on (a, a+rise), flat on (a+rise, b-rise), down on (b-rise, b)
            let up = Affine::new(scale.clone(), Surd::from(-(a * &scale)));
            let down = Affine::new(-scale.clone(), Surd::from(b * &scale));
            pieces_out.push((a.clone(), a + &rise, up));
            if a + &rise < b - &rise {
                pieces_out.push((a + &rise, b - &rise, Affine::constant(Surd::from(top))));
            }
            pieces_out.push((b - &rise, b.clone(), down));
        }
        assemble(&pieces_out)
    }
}

/// Builds a continuous piecewise function that is zero outside the given
/// (sorted, disjoint) spans.
fn assemble(spans: &[(Rational, Rational, Affine)]) -> Piecewise {
    let zero = Rational::zero();
    let one = Rational::one();
    let mut cuts: Vec<Rational> = Vec::new();
    for (a, b, _) in spans {
        for c in [a, b] {
            if *c > zero && *c < one {
                cuts.push(c.clone());
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut knots = vec![zero.clone()];
    knots.extend(cuts.iter().cloned());
    knots.push(one);
    let pieces: Vec<Affine> = knots
        .windows(2)
        .map(|w| {
            let mid = w[0].midpoint(&w[1]);
            spans
                .iter()
                .find(|(a, b, _)| *a < mid && mid < *b)
                .map(|(_, _, p)| p.clone())
                .unwrap_or_else(|| Affine::constant(Surd::zero()))
        })
        .collect();
    let breakpoints = cuts
        .into_iter()
        .map(|c| Breakpoint {
            at: Surd::from(c),
            policy: Policy::Left,
        })
        .collect();
    Piecewise::new(breakpoints, pieces).expect("sorted distinct cuts")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rep", rename_all = "snake_case")]
pub enum ClosedSetRep {
    FinitePointSet { points: Vec<Surd> },
    ComplementOfR2Open { open: OpenUnion },
}

impl ClosedSetRep {
    pub fn contains(&self, x: &Surd) -> bool {
        match self {
            ClosedSetRep::FinitePointSet { points } => points.contains(x),
            ClosedSetRep::ComplementOfR2Open { open } => !open.contains(x),
        }
    }

    pub fn validate(&self) -> Result<(), AbyssError> {
        if let ClosedSetRep::FinitePointSet { points } = self {
            for (i, p) in points.iter().enumerate() {
                if p.is_negative() || *p > Surd::one() {
                    return Err(AbyssError::Constructor(format!("point {p} outside [0,1]")));
                }
                if points[..i].contains(p) {
                    return Err(AbyssError::Constructor(format!("duplicate point {p}")));
                }
            }
        }
        Ok(())
    }

    /// The indicator as a piecewise function.
    pub fn indicator(&self) -> Piecewise {
        match self {
            ClosedSetRep::FinitePointSet { points } => Piecewise::spikes(
                Surd::zero(),
                points.iter().map(|p| (p.clone(), Surd::one())).collect(),
            )
            .expect("validated points"),
            ClosedSetRep::ComplementOfR2Open { open } => open.two_valued(Surd::zero(), Surd::one()),
        }
    }

    /// A common point, if any, decided exactly.
    pub fn common_point(&self, other: &ClosedSetRep) -> Option<Surd> {
        use ClosedSetRep::*;
        match (self, other) {
            (FinitePointSet { points }, o) | (o, FinitePointSet { points }) => {
                points.iter().find(|p| o.contains(p)).cloned()
            }
            (ComplementOfR2Open { open: a }, ComplementOfR2Open { open: b }) => {
                let u = a.union(b);
                if u.covers_unit() {
                    return None;
                }
                // 0 or the right end of some component lies outside the union
                let zero = Surd::zero();
                if !u.contains(&zero) {
                    return Some(zero);
                }
                u.intervals()
                    .iter()
                    .map(|(_, hi)| Surd::from(hi))
                    .find(|p| !u.contains(p) && *p <= Surd::one())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn merge_keeps_shared_endpoint_out() {
        let o = OpenUnion::new(vec![
            (q(1, 2), q(1, 1)),
            (q(0, 1), q(1, 2)),
            (q(1, 4), q(1, 3)),
        ])
        .unwrap();
        assert_eq!(o.intervals().len(), 2);
        assert!(!o.contains(&Surd::from(q(1, 2))));
        assert!(o.contains(&Surd::from(q(1, 3))));
    }

    #[test]
    fn radius_stays_inside() {
        let o = OpenUnion::new(vec![(q(1, 4), q(3, 4))]).unwrap();
        for x in [q(3, 10), q(1, 2), q(7, 10)] {
            let r = o.radius(&Surd::from(&x)).unwrap();
            assert!(&x - &r > q(1, 4) && &x + &r < q(3, 4));
        }
        assert_eq!(o.radius(&Surd::from(q(1, 4))), None);
    }

    #[test]
    fn indicators_match_membership() {
        let o = OpenUnion::new(vec![(q(1, 4), q(3, 4))]).unwrap();
        let ind = o.indicator();
        let c = ClosedSetRep::ComplementOfR2Open { open: o.clone() };
        let cind = c.indicator();
        for j in 0..=16 {
            let x = Surd::from(q(j, 16));
            let inside = o.contains(&x);
            assert_eq!(
                ind.eval(&x),
                if inside { Surd::one() } else { Surd::zero() }
            );
            assert_eq!(
                cind.eval(&x),
                if inside { Surd::zero() } else { Surd::one() }
            );
        }
    }

    #[test]
    fn ramps_converge_and_settle() {
        let o = OpenUnion::new(vec![(q(1, 4), q(3, 4))]).unwrap();
        let x = Surd::from(q(5, 16));
        let n = o.ramp_settles_at(&x);
        assert_eq!(n, 4);
        assert_eq!(o.ramp(n as u32, &x), Surd::one());
        assert!(o.ramp(n as u32 - 1, &x) < Surd::one());
        for m in 0..8 {
            let p = o.ramp_piecewise(m);
            for j in 0..=32 {
                let y = Surd::from(q(j, 32));
                assert_eq!(p.eval(&y), o.ramp(m, &y), "stage {m} at {j}/32");
            }
        }
    }

    #[test]
    fn intersection_checks() {
        let c0 = ClosedSetRep::ComplementOfR2Open {
            open: OpenUnion::new(vec![(q(1, 4), q(2, 1))]).unwrap(),
        };
        let c1 = ClosedSetRep::ComplementOfR2Open {
            open: OpenUnion::new(vec![(q(-1, 1), q(3, 4))]).unwrap(),
        };
        assert_eq!(c0.common_point(&c1), None);
        let p = ClosedSetRep::FinitePointSet {
            points: vec![Surd::from(q(1, 2))],
        };
        assert_eq!(p.common_point(&p.clone()), Some(Surd::from(q(1, 2))));
        let c2 = ClosedSetRep::ComplementOfR2Open {
            open: OpenUnion::new(vec![(q(-1, 1), q(1, 5))]).unwrap(),
        };
        assert_eq!(c0.common_point(&c2), Some(Surd::from(q(1, 5))));
    }
}
