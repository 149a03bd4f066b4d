//! Finite subcovers of `{B(x, Ψ(x))}` drawn from a fixed enumeration of the
//! rationals.

use std::str::FromStr;

use serde::Serialize;

use crate::error::AbyssError;
use crate::exact::{rational_enum_unit, Rational, Surd};
use crate::universe::{ClassSet, SymbolicFn};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CousinClass {
    QuasiContinuous,
    Lsco,
}

impl CousinClass {
    fn tag(self) -> ClassSet {
        match self {
            CousinClass::QuasiContinuous => ClassSet::QUASI_CONTINUOUS,
            CousinClass::Lsco => ClassSet::LSCO,
        }
    }
}

impl FromStr for CousinClass {
    type Err = AbyssError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qc" | "quasi-continuous" | "quasi_continuous" => Ok(CousinClass::QuasiContinuous),
            "lsco" => Ok(CousinClass::Lsco),
            _ => Err(AbyssError::Parse(format!("unknown covering class '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverBall {
    pub center: Rational,
    pub radius: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CousinCover {
    /// Least `n0` such that the first `n0 + 1` balls cover [0,1].
    pub n0: usize,
    pub balls: Vec<CoverBall>,
}

/// Whether the open balls cover [0,1], by a sweep over left ends.
pub fn covers_unit(balls: &[CoverBall]) -> bool {
    let mut spans: Vec<(Rational, Rational)> = balls
        .iter()
        .map(|b| (&b.center - &b.radius, &b.center + &b.radius))
        .collect();
    spans.sort();
    // every point below `reach` is covered, and so is `reach` once some
    // interval starts strictly before it and ends strictly after it
    let mut reach = Rational::zero();
    let mut i = 0;
    loop {
        let mut best: Option<Rational> = None;
        while i < spans.len() && spans[i].0 < reach {
            if spans[i].1 > reach {
                best =
                    Some(best.map_or(spans[i].1.clone(), |b: Rational| b.max(spans[i].1.clone())));
            }
            i += 1;
        }
        match best {
            Some(b) if b > Rational::one() => return true,
            Some(b) => reach = b,
            None => return false,
        }
    }
}

/// A rational lower bound for a positive radius.
fn rational_radius(v: &Surd) -> Rational {
    match v.to_rational() {
        Some(r) => r,
        None => (8..)
            .map(|p| v.floor_dyadic(p))
            .find(|r| r.is_positive())
            .expect("positive"),
    }
}

fn refusal(psi: &SymbolicFn, class: CousinClass) -> AbyssError {
    let anchor = if matches!(psi, SymbolicFn::CoverPsi { .. }) {
        "a radius function that is small on a countable set can defeat every finite choice of centres: the balls of the set members have total length below 1"
    } else if psi.tags().contains(ClassSet::USCO) {
        "usco radius functions admit the same counterexample, adjusted to be usco"
    } else {
        "rational centres only suffice when the radius function is quasi-continuous or lsco"
    };
    let needs = match class {
        CousinClass::QuasiContinuous => "positive and quasi-continuous",
        CousinClass::Lsco => "positive and lower semi-continuous",
    };
    AbyssError::Refused {
        shape: "cousin_subcover".into(),
        needs: needs.into(),
        anchor: anchor.into(),
    }
}

/// The shortest prefix `q_0, ..., q_{n0}` of the rational enumeration whose
/// balls `B(q_n, Ψ(q_n))` cover [0,1]. At most `16 * fuel` centres are tried.
pub fn cousin_subcover(
    psi: &SymbolicFn,
    class: CousinClass,
    fuel: u64,
) -> Result<CousinCover, AbyssError> {
    let tags = psi.tags();
    if !tags.contains(ClassSet::POSITIVE | class.tag()) {
        return Err(refusal(psi, class));
    }
    let budget = fuel.saturating_mul(16).max(2) as usize;
    let mut balls = Vec::with_capacity(budget);
    for c in rational_enum_unit().take(budget) {
        let v = psi.eval(&Surd::from(&c))?;
        if !v.is_positive() {
            return Err(AbyssError::Domain(format!(
                "radius {v} at {c} is not positive"
            )));
        }
        balls.push(CoverBall {
            center: c,
            radius: rational_radius(&v),
        });
    }
    if !covers_unit(&balls) {
        return Err(AbyssError::fuel(budget as u64, None));
    }
    // coverage is monotone in the prefix length
    let (mut lo, mut hi) = (0usize, balls.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if covers_unit(&balls[..=mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    balls.truncate(lo + 1);
    Ok(CousinCover { n0: lo, balls })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::{build_cover_psi, CountableSet, Piecewise};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn uniform_radius() {
        let psi = SymbolicFn::constant(q(1, 8));
        let c = cousin_subcover(&psi, CousinClass::QuasiContinuous, 64).unwrap();
        assert!(covers_unit(&c.balls));
        assert!(!covers_unit(&c.balls[..c.n0]));
        // the grid k/8 is a cover, so the minimal prefix is no longer than
        // the prefix reaching denominator 8
        let upto8 = rational_enum_unit()
            .take_while(|r| r.denom() <= &num_bigint::BigInt::from(8))
            .count();
        assert!(c.balls.len() <= upto8);
    }

    #[test]
    fn affine_radius() {
        let psi = SymbolicFn::Piecewise(Piecewise::affine(q(1, 2), Surd::from(q(1, 16))));
        let c = cousin_subcover(&psi, CousinClass::QuasiContinuous, 64).unwrap();
        assert!(covers_unit(&c.balls));
    }

    #[test]
    fn sweep_detects_gaps() {
        let b = |c: Rational, r: Rational| CoverBall {
            center: c,
            radius: r,
        };
        assert!(!covers_unit(&[
            b(q(1, 4), q(1, 4)),
            b(q(3, 4), q(1, 4)),
            b(q(0, 1), q(1, 8)),
            b(q(1, 1), q(1, 8))
        ]));
        assert!(covers_unit(&[b(q(1, 4), q(1, 3)), b(q(3, 4), q(1, 3))]));
    }

    #[test]
    fn penny_cover_is_refused() {
        let psi = build_cover_psi(CountableSet::canonical(), false).unwrap();
        assert!(matches!(
            cousin_subcover(&psi, CousinClass::QuasiContinuous, 64),
            Err(AbyssError::Refused { .. })
        ));
        let usco = build_cover_psi(CountableSet::canonical(), true).unwrap();
        assert!(matches!(
            cousin_subcover(&usco, CousinClass::Lsco, 64),
            Err(AbyssError::Refused { .. })
        ));
    }
}
