use serde::Serialize;

use crate::error::AbyssError;
use crate::exact::{DyadicInterval, Rational, Surd};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalPoint {
    pub point: Rational,
    pub interval: DyadicInterval,
    /// `J_n`, the closed third chosen against the `n`-th entry.
    pub stages: Vec<DyadicInterval>,
}

/// Nested trisection: stage `n` keeps the first closed third of the current
/// interval that `hits(n, third)` reports clear. Afterwards middle thirds are
/// kept until the width is at most `2^-k`.
pub(crate) fn trisect(
    len: usize,
    k: u32,
    mut hits: impl FnMut(usize, &DyadicInterval) -> bool,
) -> Result<DiagonalPoint, AbyssError> {
    let mut cur = DyadicInterval::unit();
    let mut stages = Vec::with_capacity(len);
    for n in 0..len {
        let third = cur.width() * Rational::new(1, 3);
        let pick = (0..3)
            .map(|j| {
                let lo = cur.lower() + &(&third * &Rational::integer(j));
                let hi = &lo + &third;
                DyadicInterval::new(lo, hi).expect("ordered")
            })
            .find(|t| !hits(n, t))
            .ok_or_else(|| {
                AbyssError::Degenerate(format!("entry {n} meets every third of {cur:?}"))
            })?;
        stages.push(pick.clone());
        cur = pick;
    }
    let eps = Rational::pow2_neg(k);
    while cur.width() > eps {
        let third = cur.width() * Rational::new(1, 3);
        cur = DyadicInterval::new(cur.lower() + &third, cur.upper() - &third)?;
    }
    Ok(DiagonalPoint {
        point: cur.midpoint(),
        interval: cur,
        stages,
    })
}

/// A point differing from every `xs[n]`: `xs[n]` lies outside the closed
/// interval `stages[n]`, which contains the result.
pub fn cantor_diagonal(xs: &[Surd], k: u32) -> DiagonalPoint {
    trisect(xs.len(), k, |n, t| t.contains(&xs[n]))
        .expect("a point meets at most two closed thirds")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn avoids_dyadics_and_the_canonical_set() {
        let mut xs = vec![Surd::zero(), Surd::one()];
        xs.extend((1..=15).map(|n| Surd::from(Rational::pow2_neg(n))));
        let d = cantor_diagonal(&xs, 20);
        let z = Surd::from(&d.point);
        assert!(d.interval.width() <= Rational::pow2_neg(20));
        for (n, x) in xs.iter().enumerate() {
            assert_ne!(&z, x);
            assert!(!d.stages[n].contains(x) && d.stages[n].contains(&z));
        }
        let a: Vec<Surd> = (0..17).map(Surd::sqrt_half_scaled).collect();
        let d = cantor_diagonal(&a, 30);
        assert!(a.iter().all(|x| *x != Surd::from(&d.point)));
    }

    #[test]
    fn constant_zero_moves_right() {
        let d = cantor_diagonal(&[Surd::zero()], 4);
        assert_eq!(
            d.stages[0],
            DyadicInterval::new(Rational::new(1, 3), Rational::new(2, 3)).unwrap()
        );
    }
}
