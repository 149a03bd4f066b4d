//! Sequences of continuous functions with a pointwise limit, used as
//! Baire-1 representations.

use serde::{Deserialize, Serialize};

use super::closed::OpenUnion;
use super::func::SymbolicFn;
use super::set::CountableSet;
use super::tags::ClassSet;
use crate::error::AbyssError;
use crate::exact::{log2_ceil_inv, Rational, Surd};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Baire1Seq {
    /// `f_n = f` for a continuous `f`.
    Constant { f: Box<SymbolicFn> },
    /// Stage `n` puts a tent of height `2^-(m+1)` near each member `a_m`,
    /// `m <= n`; the limit is the penny function of the set.
    Spikes { set: CountableSet },
    /// Stage `n` is `min(1, 2^n d(x))` with `d` the distance to the
    /// complement; the limit is the indicator of the open set.
    Ramps { open: OpenUnion },
    /// `f_n = scale · g_n + shift`.
    Affine {
        scale: Rational,
        shift: Rational,
        inner: Box<Baire1Seq>,
    },
}

impl Baire1Seq {
    pub fn validate(&self) -> Result<(), AbyssError> {
        match self {
            Baire1Seq::Constant { f } => {
                f.validate()?;
                if !f.tags().contains(ClassSet::CONTINUOUS) {
                    return Err(AbyssError::Constructor(
                        "a constant sequence needs a continuous function".into(),
                    ));
                }
                Ok(())
            }
            Baire1Seq::Spikes { set } => {
                set.validate()?;
                if !set.is_finite() && !set.has_band_property() {
                    return Err(AbyssError::Constructor(
                        "spike sequences need a finite or banded set".into(),
                    ));
                }
                Ok(())
            }
            Baire1Seq::Ramps { .. } => Ok(()),
            Baire1Seq::Affine { inner, .. } => inner.validate(),
        }
    }

    /// `f_n(x)`.
    pub fn stage(&self, n: u64, x: &Surd) -> Surd {
        match self {
            Baire1Seq::Constant { f } => f.eval(x).expect("continuous members evaluate"),
            Baire1Seq::Spikes { set } => {
                let n32 = n.min(1 << 20) as u32;
                set.members_upto(n)
                    .into_iter()
                    .map(|(m, a)| tent(&a, m, n32, x))
                    .max()
                    .unwrap_or_else(Surd::zero)
            }
            Baire1Seq::Ramps { open } => open.ramp(n.min(1 << 20) as u32, x),
            Baire1Seq::Affine {
                scale,
                shift,
                inner,
            } => inner.stage(n, x).scale(scale).shift(shift),
        }
    }

    /// An `N` with `f_n(x) = lim f_k(x)` for every `n >= N`.
    pub fn settles_at(&self, x: &Surd) -> u64 {
        match self {
            Baire1Seq::Constant { .. } => 0,
            Baire1Seq::Ramps { open } => open.ramp_settles_at(x),
            Baire1Seq::Spikes { set } => spikes_settle(set, x),
            Baire1Seq::Affine { inner, .. } => inner.settles_at(x),
        }
    }

    pub fn limit(&self) -> SymbolicFn {
        match self {
            Baire1Seq::Constant { f } => (**f).clone(),
            Baire1Seq::Spikes { set } => SymbolicFn::Penny { set: set.clone() },
            Baire1Seq::Ramps { open } => SymbolicFn::Piecewise(open.indicator()),
            Baire1Seq::Affine {
                scale,
                shift,
                inner,
            } => SymbolicFn::sum(
                SymbolicFn::scaled(scale.clone(), inner.limit()),
                SymbolicFn::constant(shift.clone()),
            ),
        }
    }

    /// Irrational points where the limit may exceed what its rational
    /// values show, with index at most `cap`.
    pub fn anchors(&self, cap: u64) -> Vec<(u64, Surd)> {
        match self {
            Baire1Seq::Spikes { set } => set.members_upto(cap),
            Baire1Seq::Affine { inner, .. } => inner.anchors(cap),
            _ => Vec::new(),
        }
    }
}

/// Tent of height `2^-(m+1)` centred on a dyadic approximation of `a`.
fn tent(a: &Surd, m: u64, n: u32, x: &Surd) -> Surd {
    let c = Surd::from(a.floor_dyadic(n + 4));
    let plateau = Rational::pow2_neg(n + 3);
    let support = Rational::pow2_neg(n + 2);
    let h = Rational::pow2_neg(m.min(u32::MAX as u64 - 1) as u32 + 1);
    let d = (x - &c).abs();
    if d <= Surd::from(&plateau) {
        Surd::from(h)
    } else if d < Surd::from(&support) {
        // linear from h at the plateau edge down to 0 at the support edge
        let slope = &h / &(&support - &plateau);
        (&Surd::from(&support) - &d).scale(&slope)
    } else {
        Surd::zero()
    }
}

/// Least `n` with `2^-(n+1) <= d`.
fn separation_stage(d: &Surd) -> u64 {
    (log2_ceil_inv(d) as u64).saturating_sub(1)
}

fn spikes_settle(set: &CountableSet, x: &Surd) -> u64 {
    if let Some(m) = set.index_of(x) {
        let near = set
            .members_upto(m.saturating_sub(1))
            .into_iter()
            .filter(|(i, _)| *i < m)
            .map(|(_, a)| separation_stage(&(x - &a).abs()))
            .max()
            .unwrap_or(0);
        return near.max(m);
    }
    if !x.is_positive() && set.has_band_property() {
        return 0;
    }
    // Only members within 2^-(m+1) of x can still cover it after stage m.
    let candidates = if set.is_finite() {
        set.members_upto(u64::MAX)
    } else {
        set.members_upto(log2_ceil_inv(x) as u64 + 2)
    };
    candidates
        .into_iter()
        .map(|(m, a)| (m, separation_stage(&(x - &a).abs())))
        .filter(|(m, n)| n > m)
        .map(|(_, n)| n)
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Surd {
        Surd::from(Rational::new(n, d))
    }

    #[test]
    fn spikes_settle_to_penny() {
        let seq = Baire1Seq::Spikes {
            set: CountableSet::canonical(),
        };
        let limit = seq.limit();
        let mut probes: Vec<Surd> = (0..=32).map(|j| q(j, 32)).collect();
        probes.extend((0..8).map(Surd::sqrt_half_scaled));
        probes.push(&Surd::sqrt_half_scaled(2) + &q(1, 1000));
        for x in &probes {
            let n = seq.settles_at(x);
            let want = limit.eval(x).unwrap();
            for k in n..n + 6 {
                assert_eq!(seq.stage(k, x), want, "x = {x}, stage {k}, settles at {n}");
            }
        }
    }

    #[test]
    fn tents_are_continuous_at_their_edges() {
        let a = Surd::sqrt_half_scaled(0);
        let c = Surd::from(a.floor_dyadic(7));
        let edge = c.shift(&Rational::pow2_neg(5));
        assert_eq!(tent(&a, 0, 3, &edge), Surd::zero());
        let inner = c.shift(&Rational::pow2_neg(6));
        assert_eq!(tent(&a, 0, 3, &inner), q(1, 2));
    }

    #[test]
    fn ramps_settle_to_indicator() {
        let open = OpenUnion::new(vec![(Rational::new(1, 4), Rational::new(3, 4))]).unwrap();
        let seq = Baire1Seq::Ramps { open };
        let limit = seq.limit();
        for j in 0..=64 {
            let x = q(j, 64);
            let n = seq.settles_at(&x);
            assert_eq!(seq.stage(n, &x), limit.eval(&x).unwrap());
        }
    }
}
