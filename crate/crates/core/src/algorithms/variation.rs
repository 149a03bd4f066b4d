//! One-sided limits, jumps, total variation and the Jordan decomposition.

use serde::Serialize;

use super::bisect::check_point;
use crate::error::AbyssError;
use crate::exact::{DyadicInterval, Rational, Surd};
use crate::universe::{ClassSet, Piecewise, SymbolicFn};

fn refuse(op: &str, needs: &str, anchor: &str) -> AbyssError {
    AbyssError::Refused {
        shape: op.into(),
        needs: needs.into(),
        anchor: anchor.into(),
    }
}

fn require_regulated(f: &SymbolicFn, op: &str) -> Result<(), AbyssError> {
    if f.tags().contains(ClassSet::REGULATED) {
        Ok(())
    } else {
        Err(refuse(
            op,
            "regulated",
            "one-sided limits must exist everywhere",
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneSidedLimits {
    /// `f(x-)`; absent at 0.
    pub left: Option<DyadicInterval>,
    /// `f(x+)`; absent at 1.
    pub right: Option<DyadicInterval>,
}

/// Enclosures of width `2^-k` of `f(x-)` and `f(x+)`.
pub fn limits_lr(f: &SymbolicFn, x: &Surd, k: u32) -> Result<OneSidedLimits, AbyssError> {
    check_point(x)?;
    require_regulated(f, "limits")?;
    let local = f.local(x)?;
    let enclose = |s: Option<crate::universe::SideLimits>,
                   side: &str|
     -> Result<Option<DyadicInterval>, AbyssError> {
        match s {
            None => Ok(None),
            Some(s) => match s.limit() {
                Some(v) => Ok(Some(DyadicInterval::enclose(v, k))),
                None => Err(AbyssError::NotApplicable(format!("no {side} limit at {x}"))),
            },
        }
    };
    Ok(OneSidedLimits {
        left: enclose(local.left, "left")?,
        right: enclose(local.right, "right")?,
    })
}

/// Points where a jump can occur, up to index `cap` for infinite families.
fn jump_candidates(f: &SymbolicFn, cap: u64) -> Vec<Surd> {
    let mut out = f.special_points(cap);
    collect_band_edges(f, cap, &mut out);
    out.sort();
    out.dedup();
    out
}

fn collect_band_edges(f: &SymbolicFn, cap: u64, out: &mut Vec<Surd>) {
    match f {
        SymbolicFn::CoverPsi { usco: true, .. } => {
            out.extend((1..=cap.min(1 << 16) as u32).map(|n| Surd::from(Rational::pow2_neg(n))));
        }
        SymbolicFn::Sum { left, right } | SymbolicFn::Difference { left, right } => {
            collect_band_edges(left, cap, out);
            collect_band_edges(right, cap, out);
        }
        SymbolicFn::Scale { inner, .. } => collect_band_edges(inner, cap, out),
        _ => {}
    }
}

/// The jump points `f(x-) != f(x+)` among candidates of index at most `cap`,
/// in increasing order. Every prefix is duplicate-free and the lists grow
/// with `cap`.
pub fn jump_enum(f: &SymbolicFn, cap: u64) -> Result<Vec<Surd>, AbyssError> {
    require_regulated(f, "jumps")?;
    let mut out = Vec::new();
    for x in jump_candidates(f, cap) {
        if x.is_negative() || x > Surd::one() {
            continue;
        }
        let local = f.local(&x)?;
        let l = local.left.as_ref().and_then(|s| s.limit().cloned());
        let r = local.right.as_ref().and_then(|s| s.limit().cloned());
        if let (Some(l), Some(r)) = (l, r) {
            if l != r {
                out.push(x);
            }
        }
    }
    Ok(out)
}

fn nbv_piecewise(f: &SymbolicFn, op: &str) -> Result<Piecewise, AbyssError> {
    if !f.tags().contains(ClassSet::NORMALISED_BV) {
        return Err(refuse(
            op,
            "normalised bounded variation",
            "for general BV functions the variation is out of reach: a penny function has variation concentrated on points no rational sample sees",
        ));
    }
    f.as_piecewise()
        .ok_or_else(|| AbyssError::Unsupported(format!("{op} needs a piecewise description")))
}

/// `V_0^x(f)` to within `2^-k`.
pub fn total_variation_nbv(f: &SymbolicFn, x: &Surd, k: u32) -> Result<DyadicInterval, AbyssError> {
    check_point(x)?;
    let p = nbv_piecewise(f, "variation")?;
    Ok(DyadicInterval::enclose(&p.variation_upto(x), k))
}

/// `f = g - h` with `g = V_0^x(f)` and `h = g - f`, both non-decreasing.
#[derive(Clone, Debug)]
pub struct JordanPair {
    f: Piecewise,
}

pub fn jordan_nbv(f: &SymbolicFn) -> Result<JordanPair, AbyssError> {
    Ok(JordanPair {
        f: nbv_piecewise(f, "jordan")?,
    })
}

impl JordanPair {
    pub fn g(&self, x: &Surd) -> Result<Surd, AbyssError> {
        check_point(x)?;
        Ok(self.f.variation_upto(x))
    }

    pub fn h(&self, x: &Surd) -> Result<Surd, AbyssError> {
        Ok(&self.g(x)? - &self.f.eval(x))
    }

    pub fn g_within(&self, x: &Surd, k: u32) -> Result<DyadicInterval, AbyssError> {
        Ok(DyadicInterval::enclose(&self.g(x)?, k))
    }

    pub fn h_within(&self, x: &Surd, k: u32) -> Result<DyadicInterval, AbyssError> {
        Ok(DyadicInterval::enclose(&self.h(x)?, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::{build_cover_psi, Breakpoint, CountableSet, Policy};

    fn q(n: i64, d: i64) -> Surd {
        Surd::from(Rational::new(n, d))
    }

    fn step() -> SymbolicFn {
        SymbolicFn::Piecewise(
            Piecewise::step(q(1, 2), Surd::zero(), Surd::one(), Policy::Right).unwrap(),
        )
    }

    #[test]
    fn limits_of_a_step() {
        let l = limits_lr(&step(), &q(1, 2), 10).unwrap();
        assert!(l.left.unwrap().contains(&Surd::zero()));
        assert!(l.right.unwrap().contains(&Surd::one()));
        let penny = SymbolicFn::penny(CountableSet::canonical());
        let l = limits_lr(&penny, &Surd::sqrt_half_scaled(0), 10).unwrap();
        assert!(
            l.left.unwrap().contains(&Surd::zero()) && l.right.unwrap().contains(&Surd::zero())
        );
        assert!(limits_lr(&SymbolicFn::identity(), &Surd::zero(), 4)
            .unwrap()
            .left
            .is_none());
    }

    #[test]
    fn jumps() {
        assert_eq!(jump_enum(&step(), 8).unwrap(), vec![q(1, 2)]);
        assert!(jump_enum(&SymbolicFn::penny(CountableSet::canonical()), 32)
            .unwrap()
            .is_empty());
        let stairs = Piecewise::new(
            vec![
                Breakpoint {
                    at: q(1, 2),
                    policy: Policy::Right,
                },
                Breakpoint {
                    at: q(3, 4),
                    policy: Policy::Right,
                },
            ],
            vec![
                crate::universe::Affine::constant(Surd::zero()),
                crate::universe::Affine::constant(q(1, 2)),
                crate::universe::Affine::constant(Surd::one()),
            ],
        )
        .unwrap();
        assert_eq!(
            jump_enum(&SymbolicFn::Piecewise(stairs), 8).unwrap(),
            vec![q(1, 2), q(3, 4)]
        );
        let psi = build_cover_psi(CountableSet::canonical(), true).unwrap();
        let j = jump_enum(&psi, 6).unwrap();
        assert!(j.contains(&q(1, 4)));
    }

    #[test]
    fn variation_and_jordan() {
        let v = total_variation_nbv(&SymbolicFn::identity(), &Surd::one(), 10).unwrap();
        assert!(v.contains(&Surd::one()));
        let v = total_variation_nbv(&step(), &Surd::one(), 10).unwrap();
        assert!(v.contains(&Surd::one()));
        let j = jordan_nbv(&step()).unwrap();
        assert_eq!(j.g(&q(3, 4)).unwrap(), Surd::one());
        assert!(j.h(&q(3, 4)).unwrap().is_zero());
        let penny = SymbolicFn::penny(CountableSet::canonical());
        assert!(matches!(
            total_variation_nbv(&penny, &Surd::one(), 4),
            Err(AbyssError::Refused { .. })
        ));
    }
}
