//! Piecewise-affine functions with exact breakpoints and explicit values at
//! every breakpoint.

use serde::{Deserialize, Serialize};

use super::region::{Region, View};
use super::tags::ClassSet;
use crate::error::AbyssError;
use crate::exact::{Rational, Surd};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    pub slope: Rational,
    pub intercept: Surd,
}

impl Affine {
    pub fn new(slope: Rational, intercept: Surd) -> Self {
        Affine { slope, intercept }
    }

    pub fn constant(c: Surd) -> Self {
        Affine {
            slope: Rational::zero(),
            intercept: c,
        }
    }

    pub fn at(&self, x: &Surd) -> Surd {
        &x.scale(&self.slope) + &self.intercept
    }

    fn add(&self, o: &Affine) -> Affine {
        Affine {
            slope: &self.slope + &o.slope,
            intercept: &self.intercept + &o.intercept,
        }
    }

    fn scale(&self, c: &Rational) -> Affine {
        Affine {
            slope: &self.slope * c,
            intercept: self.intercept.scale(c),
        }
    }
}

/// Value taken at a breakpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Limit from the left (from the right at 0).
    Left,
    /// Limit from the right (from the left at 1).
    Right,
    Value(Surd),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub at: Surd,
    pub policy: Policy,
}

/// `pieces[j]` is used on the open gap between consecutive knots, where the
/// knots are 0, the interior breakpoints, and 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piecewise {
    #[serde(default)]
    pub breakpoints: Vec<Breakpoint>,
    pub pieces: Vec<Affine>,
}

enum Loc {
    Knot(usize),
    Inside(usize),
}

impl Piecewise {
    pub fn new(breakpoints: Vec<Breakpoint>, pieces: Vec<Affine>) -> Result<Self, AbyssError> {
        let p = Piecewise {
            breakpoints,
            pieces,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn constant(c: Surd) -> Self {
        Piecewise {
            breakpoints: Vec::new(),
            pieces: vec![Affine::constant(c)],
        }
    }

    pub fn affine(slope: Rational, intercept: Surd) -> Self {
        Piecewise {
            breakpoints: Vec::new(),
            pieces: vec![Affine::new(slope, intercept)],
        }
    }

    pub fn identity() -> Self {
        Piecewise::affine(Rational::one(), Surd::zero())
    }

    /// `lo` on `[0, at)`, `hi` on `(at, 1]`, value at `at` from `policy`.
    pub fn step(at: Surd, lo: Surd, hi: Surd, policy: Policy) -> Result<Self, AbyssError> {
        Piecewise::new(
            vec![Breakpoint { at, policy }],
            vec![Affine::constant(lo), Affine::constant(hi)],
        )
    }

    /// Constant `base` with isolated values at the given points.
    pub fn spikes(base: Surd, mut points: Vec<(Surd, Surd)>) -> Result<Self, AbyssError> {
        points.sort_by(|a, b| a.0.cmp(&b.0));
        let mut breakpoints = Vec::new();
        for (at, v) in points {
            breakpoints.push(Breakpoint {
                at,
                policy: Policy::Value(v),
            });
        }
        let gaps = Piecewise::gap_count(&breakpoints);
        Piecewise::new(breakpoints, vec![Affine::constant(base); gaps])
    }

    fn gap_count(bps: &[Breakpoint]) -> usize {
        1 + bps
            .iter()
            .filter(|b| !b.at.is_zero() && b.at != Surd::one())
            .count()
    }

    pub fn validate(&self) -> Result<(), AbyssError> {
        let zero = Surd::zero();
        let one = Surd::one();
        for (i, b) in self.breakpoints.iter().enumerate() {
            if b.at < zero || b.at > one {
                return Err(AbyssError::Constructor(format!(
                    "breakpoint {} outside [0,1]",
                    b.at
                )));
            }
            if i > 0 && self.breakpoints[i - 1].at >= b.at {
                return Err(AbyssError::Constructor(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
        }
        let gaps = Piecewise::gap_count(&self.breakpoints);
        if self.pieces.len() != gaps {
            return Err(AbyssError::Constructor(format!(
                "{} breakpoints need {} pieces, got {}",
                self.breakpoints.len(),
                gaps,
                self.pieces.len()
            )));
        }
        Ok(())
    }

    /// 0, interior breakpoints, 1.
    pub fn knots(&self) -> Vec<Surd> {
        let mut k = vec![Surd::zero()];
        k.extend(
            self.breakpoints
                .iter()
                .filter(|b| !b.at.is_zero() && b.at != Surd::one())
                .map(|b| b.at.clone()),
        );
        k.push(Surd::one());
        k
    }

    fn locate(&self, knots: &[Surd], x: &Surd) -> Loc {
        match knots.binary_search(x) {
            Ok(i) => Loc::Knot(i),
            Err(i) => Loc::Inside(i - 1),
        }
    }

    fn knot_value(&self, knots: &[Surd], i: usize) -> Surd {
        let left = (i > 0).then(|| self.pieces[i - 1].at(&knots[i]));
        let right = (i + 1 < knots.len()).then(|| self.pieces[i].at(&knots[i]));
        let policy = self
            .breakpoints
            .iter()
            .find(|b| b.at == knots[i])
            .map(|b| &b.policy);
        match policy {
            Some(Policy::Value(v)) => v.clone(),
            Some(Policy::Right) => right.or(left).expect("some side exists"),
            Some(Policy::Left) | None => left.or(right).expect("some side exists"),
        }
    }

    pub fn eval(&self, x: &Surd) -> Surd {
        let knots = self.knots();
        match self.locate(&knots, x) {
            Loc::Knot(i) => self.knot_value(&knots, i),
            Loc::Inside(j) => self.pieces[j].at(x),
        }
    }

    /// `(f(x-), f(x+))`; absent at 0 and 1 respectively.
    pub fn side_limits(&self, x: &Surd) -> (Option<Surd>, Option<Surd>) {
        let knots = self.knots();
        match self.locate(&knots, x) {
            Loc::Knot(i) => {
                let left = (i > 0).then(|| self.pieces[i - 1].at(x));
                let right = (i + 1 < knots.len()).then(|| self.pieces[i].at(x));
                (left, right)
            }
            Loc::Inside(j) => (Some(self.pieces[j].at(x)), Some(self.pieces[j].at(x))),
        }
    }

    /// Whether `f >= q` on some neighbourhood of `x` in [0,1].
    pub fn stays_at_least(&self, x: &Surd, q: &Surd) -> bool {
        if self.eval(x) < *q {
            return false;
        }
        let knots = self.knots();
        let (left, right) = match self.locate(&knots, x) {
            Loc::Knot(i) => (
                (i > 0).then(|| &self.pieces[i - 1]),
                (i + 1 < knots.len()).then(|| &self.pieces[i]),
            ),
            Loc::Inside(j) => (Some(&self.pieces[j]), Some(&self.pieces[j])),
        };
        // each side is affine near x: it must start above q, or at q and
        // move away from it
        let side = |p: Option<&Affine>, leftward: bool| {
            p.is_none_or(|p| {
                let v = p.at(x);
                let away = if leftward {
                    !p.slope.is_positive()
                } else {
                    !p.slope.is_negative()
                };
                v > *q || (v == *q && away)
            })
        };
        side(left, true) && side(right, false)
    }

    /// `(sup, inf)` over the points of `r` visible in `view`; knots count as
    /// always-probed special points.
    pub fn extremes(&self, r: &Region, view: View) -> Option<(Surd, Surd)> {
        if r.is_empty() {
            return None;
        }
        if let Some(p) = r.as_point() {
            if !view.sees_point(p) {
                return None;
            }
            let v = self.eval(p);
            return Some((v.clone(), v));
        }
        let knots = self.knots();
        let mut acc = Acc::default();
        for (j, piece) in self.pieces.iter().enumerate() {
            if let Some((a, b)) = r.clip_open(&knots[j], &knots[j + 1]) {
                acc.push(piece.at(&a));
                acc.push(piece.at(&b));
            }
        }
        for (i, k) in knots.iter().enumerate() {
            if r.contains(k) && view.sees_point(k) {
                acc.push(self.knot_value(&knots, i));
            }
        }
        acc.finish()
    }

    /// Knot data `(x, f(x-), f(x), f(x+))`.
    pub fn knot_table(&self) -> Vec<(Surd, Option<Surd>, Surd, Option<Surd>)> {
        let knots = self.knots();
        (0..knots.len())
            .map(|i| {
                let (l, r) = self.side_limits(&knots[i]);
                (knots[i].clone(), l, self.knot_value(&knots, i), r)
            })
            .collect()
    }

    pub fn tags(&self) -> ClassSet {
        let mut t = ClassSet::CLIQUISH
            | ClassSet::SIMPLY_CONTINUOUS
            | ClassSet::BV
            | ClassSet::REGULATED
            | ClassSet::BAIRE1
            | ClassSet::BOUNDED_BELOW;
        let (mut cont, mut qc, mut usco, mut lsco, mut cadlag, mut rat) =
            (true, true, true, true, true, true);
        let mut positive = true;
        let table = self.knot_table();
        for (x, l, v, r) in &table {
            let sides: Vec<&Surd> = l.iter().chain(r.iter()).collect();
            cont &= sides.iter().all(|s| *s == v);
            qc &= sides.contains(&v);
            usco &= sides.iter().all(|s| *s <= v);
            lsco &= sides.iter().all(|s| *s >= v);
            if r.is_some() {
                cadlag &= r.as_ref() == Some(v);
            }
            if !x.is_rational() {
                let hi = sides.iter().copied().max().expect("interior knot");
                let lo = sides.iter().copied().min().expect("interior knot");
                rat &= lo <= v && v <= hi;
            }
            positive &= v.is_positive();
        }
        let knots = self.knots();
        for (j, p) in self.pieces.iter().enumerate() {
            let (a, b) = (p.at(&knots[j]), p.at(&knots[j + 1]));
            positive &= !a.is_negative() && !b.is_negative() && !(a.is_zero() && b.is_zero());
        }
        if cont {
            t |= ClassSet::CONTINUOUS | ClassSet::RATIONAL_EXTREMA;
        }
        if qc {
            t |= ClassSet::QUASI_CONTINUOUS;
        }
        if usco {
            t |= ClassSet::USCO;
        }
        if lsco {
            t |= ClassSet::LSCO;
        }
        if rat {
            t |= ClassSet::RATIONAL_EXTREMA;
        }
        if cadlag && self.eval(&Surd::zero()).is_zero() {
            t |= ClassSet::NORMALISED_BV;
        }
        if positive {
            t |= ClassSet::POSITIVE;
        }
        t
    }

    /// Points where `f(x-) != f(x+)`.
    pub fn jumps(&self) -> Vec<Surd> {
        self.knot_table()
            .into_iter()
            .filter_map(|(x, l, _, r)| match (l, r) {
                (Some(l), Some(r)) if l != r => Some(x),
                _ => None,
            })
            .collect()
    }

    /// Exact `V_0^x(f)`.
    pub fn variation_upto(&self, x: &Surd) -> Surd {
        let knots = self.knots();
        let mut total = Surd::zero();
        for (j, p) in self.pieces.iter().enumerate() {
            if &knots[j] >= x {
                break;
            }
            let end = knots[j + 1].clone().min(x.clone());
            total = &total + &(&end - &knots[j]).scale(&p.slope.abs());
        }
        for (i, k) in knots.iter().enumerate() {
            if k > x {
                break;
            }
            let v = self.knot_value(&knots, i);
            if i > 0 {
                total = &total + &(&v - &self.pieces[i - 1].at(k)).abs();
            }
            if k < x && i + 1 < knots.len() {
                total = &total + &(&self.pieces[i].at(k) - &v).abs();
            }
        }
        total
    }

    pub fn scale(&self, c: &Rational) -> Piecewise {
        let breakpoints = self
            .breakpoints
            .iter()
            .map(|b| Breakpoint {
                at: b.at.clone(),
                policy: match &b.policy {
                    Policy::Value(v) => Policy::Value(v.scale(c)),
                    p => p.clone(),
                },
            })
            .collect();
        Piecewise {
            breakpoints,
            pieces: self.pieces.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Pointwise sum; every merged breakpoint carries its exact value.
    pub fn add(&self, other: &Piecewise) -> Piecewise {
        let mut pts: Vec<Surd> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .map(|b| b.at.clone())
            .collect();
        pts.sort();
        pts.dedup();
        let breakpoints: Vec<Breakpoint> = pts
            .iter()
            .map(|x| Breakpoint {
                at: x.clone(),
                policy: Policy::Value(&self.eval(x) + &other.eval(x)),
            })
            .collect();
        let mut knots = vec![Surd::zero()];
        knots.extend(
            pts.iter()
                .filter(|b| !b.is_zero() && **b != Surd::one())
                .cloned(),
        );
        knots.push(Surd::one());
        let (ka, kb) = (self.knots(), other.knots());
        let pieces = knots
            .windows(2)
            .map(|w| {
                // any interior point of the gap identifies the operand pieces
                let mid = (&w[0] + &w[1]).scale(&Rational::new(1, 2));
                let pa = piece_at(&self.pieces, &ka, &mid);
                let pb = piece_at(&other.pieces, &kb, &mid);
                pa.add(pb)
            })
            .collect();
        Piecewise {
            breakpoints,
            pieces,
        }
    }
}

fn piece_at<'a>(pieces: &'a [Affine], knots: &[Surd], x: &Surd) -> &'a Affine {
    let i = match knots.binary_search(x) {
        Ok(i) => i.min(pieces.len() - 1),
        Err(i) => i - 1,
    };
    &pieces[i]
}

/// Running `(sup, inf)`.
#[derive(Default)]
pub(crate) struct Acc {
    best: Option<(Surd, Surd)>,
}

impl Acc {
    pub(crate) fn push(&mut self, v: Surd) {
        self.best = Some(match self.best.take() {
            None => (v.clone(), v),
            Some((hi, lo)) => (hi.max(v.clone()), lo.min(v)),
        });
    }

    pub(crate) fn finish(self) -> Option<(Surd, Surd)> {
        self.best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Surd {
        t.parse().unwrap()
    }

    fn half_step() -> Piecewise {
        Piecewise::step(s("1/2"), s("0"), s("1"), Policy::Right).unwrap()
    }

    #[test]
    fn step_values_and_limits() {
        let f = half_step();
        assert_eq!(f.eval(&s("1/2")), s("1"));
        assert_eq!(f.eval(&s("1/4")), s("0"));
        assert_eq!(f.side_limits(&s("1/2")), (Some(s("0")), Some(s("1"))));
        assert_eq!(f.jumps(), vec![s("1/2")]);
        let t = f.tags();
        assert!(t.contains(ClassSet::NORMALISED_BV | ClassSet::QUASI_CONTINUOUS | ClassSet::USCO));
        assert!(!t.contains(ClassSet::LSCO));
    }

    #[test]
    fn extremes_respect_openness() {
        let f = half_step();
        let left = Region::new(s("0"), false, s("1/2"), true);
        assert_eq!(f.extremes(&left, View::Full), Some((s("0"), s("0"))));
        let closed = Region::closed(s("0"), s("1/2"));
        assert_eq!(f.extremes(&closed, View::Full), Some((s("1"), s("0"))));
    }

    #[test]
    fn irrational_spike_hidden_from_rationals() {
        let f = Piecewise::spikes(s("0"), vec![(s("1/2*sqrt2"), s("1"))]).unwrap();
        let all = Region::unit();
        assert_eq!(f.extremes(&all, View::Full).unwrap().0, s("1"));
        assert_eq!(f.extremes(&all, View::Rational).unwrap().0, s("0"));
        assert!(!f.tags().contains(ClassSet::RATIONAL_EXTREMA));
        assert!(f.tags().contains(ClassSet::USCO));
    }

    #[test]
    fn variation_of_staircase() {
        let f = Piecewise::new(
            vec![
                Breakpoint {
                    at: s("1/3"),
                    policy: Policy::Right,
                },
                Breakpoint {
                    at: s("2/3"),
                    policy: Policy::Right,
                },
            ],
            vec![
                Affine::constant(s("0")),
                Affine::constant(s("1/2")),
                Affine::constant(s("3/4")),
            ],
        )
        .unwrap();
        assert_eq!(f.variation_upto(&s("1")), s("3/4"));
        assert_eq!(f.variation_upto(&s("1/3")), s("1/2"));
        assert_eq!(f.variation_upto(&s("1/4")), s("0"));
        assert_eq!(Piecewise::identity().variation_upto(&s("1")), s("1"));
    }

    #[test]
    fn sum_merges_breakpoints() {
        let f = half_step().add(&Piecewise::identity());
        assert_eq!(f.eval(&s("1/2")), s("3/2"));
        assert_eq!(f.eval(&s("1/4")), s("1/4"));
        assert_eq!(f.eval(&s("3/4")), s("7/4"));
        assert_eq!(f.side_limits(&s("1/2")), (Some(s("1/2")), Some(s("3/2"))));
    }

    #[test]
    fn piece_count_checked() {
        assert!(Piecewise::new(
            vec![Breakpoint {
                at: s("1/2"),
                policy: Policy::Left
            }],
            vec![]
        )
        .is_err());
        assert!(
            Piecewise::spikes(s("0"), vec![(s("0"), s("1")), (s("1"), s("1"))])
                .unwrap()
                .pieces
                .len()
                == 1
        );
    }

    #[test]
    fn creeping_up_to_the_level() {
        // x - 1 reaches 0 at 1 from below
        let f = Piecewise::affine(Rational::one(), s("-1"));
        assert!(!f.stays_at_least(&s("1"), &s("0")));
        assert!(f.stays_at_least(&s("1"), &s("-1/8")));
        let g = Piecewise::affine(-Rational::one(), s("1"));
        assert!(g.stays_at_least(&s("1"), &s("0")));
        assert!(half_step().stays_at_least(&s("1/2"), &s("0")));
        assert!(!half_step().stays_at_least(&s("1/2"), &s("1")));
    }
}
