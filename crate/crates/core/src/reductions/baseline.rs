use num_bigint::BigInt;
use serde::Serialize;

use super::sup::SupOracle;
use crate::error::AbyssError;
use crate::exact::{Rational, Surd};
use crate::universe::{CountableSet, SymbolicFn};

/// The largest value of `f` on the dyadic grid of step `2^-depth` in
/// `[p, q]`. Sound for quasi-continuous `f` only.
pub fn naive_rational_sup(
    f: &SymbolicFn,
    p: &Rational,
    q: &Rational,
    depth: u32,
) -> Result<Rational, AbyssError> {
    let scale = Rational::from_bigint(BigInt::from(1) << depth as usize);
    let (first, last) = ((p * &scale).ceil(), (q * &scale).floor());
    let mut best: Option<Rational> = None;
    let mut j = first;
    while j <= last {
        let x = Rational::dyadic(j.clone(), depth);
        let v = f.eval(&Surd::from(&x))?;
        let v = v
            .to_rational()
            .ok_or_else(|| AbyssError::Unsupported(format!("irrational value {v} at {x}")))?;
        if best.as_ref().is_none_or(|b| &v > b) {
            best = Some(v);
        }
        j += 1;
    }
    best.ok_or_else(|| {
        AbyssError::Degenerate(format!("no grid point of step 2^-{depth} in [{p}, {q}]"))
    })
}

/// The rational-grid baseline set against the exact oracle on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct AbyssDemo {
    pub family: String,
    pub instance: serde_json::Value,
    pub interval: [Rational; 2],
    pub depth: u32,
    pub baseline: Rational,
    pub oracle: Rational,
    pub gap: Rational,
    pub certificate: Vec<String>,
}

pub fn demo_abyss(family: &str, depth: u32) -> Result<AbyssDemo, AbyssError> {
    if depth > 30 {
        return Err(AbyssError::Domain(format!(
            "grid depth {depth} is above 30"
        )));
    }
    let f = match family {
        "penny" => SymbolicFn::penny(CountableSet::canonical()),
        "tilde-penny" => SymbolicFn::TildePenny {
            set: CountableSet::canonical(),
        },
        "thomae" => SymbolicFn::Thomae,
        other => {
            return Err(AbyssError::Parse(format!(
                "unknown family '{other}' (penny, tilde-penny, thomae)"
            )));
        }
    };
    let (p, q) = (Rational::zero(), Rational::one());
    let baseline = naive_rational_sup(&f, &p, &q, depth)?;
    let oracle = SupOracle::exact().sup(&f, &p, &q)?;
    let gap = &oracle - &baseline;
    let mut certificate = vec![format!(
        "all {} grid points j/2^{depth} evaluate to at most {baseline}",
        (1u64 << depth) + 1
    )];
    if let Some((i, a)) = f
        .special_set()
        .and_then(|s| s.members_upto(0).into_iter().next())
    {
        certificate.push(format!(
            "member {i} = {a} is irrational and has value {}",
            f.eval(&a)?
        ));
    }
    certificate.push(format!("exact sup on [0, 1] is {oracle}; gap {gap}"));
    if gap.is_negative() {
        return Err(AbyssError::OracleInconsistent(format!(
            "grid value {baseline} exceeds sup {oracle}"
        )));
    }
    Ok(AbyssDemo {
        family: family.into(),
        instance: serde_json::to_value(&f).expect("serialisable"),
        interval: [p, q],
        depth,
        baseline,
        oracle,
        gap,
        certificate,
    })
}

/// Exhaustive check that no selection of at most `max_size` balls
/// `B(c, Ψ(c))`, centres drawn from `{0}` and the first `prefix` companion
/// members, has total length 1 or more.
#[derive(Clone, Debug, Serialize)]
pub struct CoverMeasure {
    pub centres: Vec<Surd>,
    pub lengths: Vec<Rational>,
    pub selections: u64,
    pub max_total: Rational,
    pub holds: bool,
}

pub fn cover_measure_check(
    set: &CountableSet,
    prefix: u64,
    max_size: usize,
) -> Result<CoverMeasure, AbyssError> {
    let psi = SymbolicFn::CoverPsi {
        set: set.clone(),
        usco: false,
    };
    psi.validate()?;
    let companion = psi.companion().expect("cover functions have a companion");
    let mut centres = vec![Surd::zero()];
    if prefix > 0 {
        centres.extend(
            companion
                .members_upto(prefix - 1)
                .into_iter()
                .map(|(_, a)| a),
        );
    }
    if centres.len() > 24 {
        return Err(AbyssError::Domain(format!(
            "{} centres is too many to enumerate",
            centres.len()
        )));
    }
    let lengths = centres
        .iter()
        .map(|c| {
            let v = psi.eval(c)?;
            v.to_rational()
                .map(|r| r * Rational::integer(2))
                .ok_or_else(|| AbyssError::Unsupported(format!("irrational radius {v}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut selections = 0u64;
    let mut max_total = Rational::zero();
    for mask in 0u32..(1 << centres.len()) {
        if mask.count_ones() as usize > max_size {
            continue;
        }
        selections += 1;
        let total = (0..centres.len())
            .filter(|i| mask & (1 << i) != 0)
            .fold(Rational::zero(), |acc, i| acc + &lengths[i]);
        if total > max_total {
            max_total = total;
        }
    }
    let holds = max_total < Rational::one();
    Ok(CoverMeasure {
        centres,
        lengths,
        selections,
        max_total,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_misses_the_pennies() {
        let f = SymbolicFn::penny(CountableSet::canonical());
        for d in [8, 16, 20] {
            assert!(
                naive_rational_sup(&f, &Rational::zero(), &Rational::one(), d)
                    .unwrap()
                    .is_zero()
            );
        }
        let t = naive_rational_sup(
            &SymbolicFn::Thomae,
            &Rational::new(1, 4),
            &Rational::new(3, 4),
            8,
        )
        .unwrap();
        assert_eq!(t, Rational::new(1, 2));
        let c = SymbolicFn::constant(Rational::new(1, 3));
        assert_eq!(
            naive_rational_sup(&c, &Rational::zero(), &Rational::one(), 3).unwrap(),
            Rational::new(1, 3)
        );
    }

    #[test]
    fn demo_reports_the_gap() {
        let d = demo_abyss("penny", 12).unwrap();
        assert!(d.baseline.is_zero());
        assert_eq!(d.gap, Rational::new(1, 2));
        assert!(demo_abyss("thomae", 6).unwrap().gap.is_zero());
        assert!(demo_abyss("nope", 4).is_err());
    }

    #[test]
    fn cover_balls_stay_short() {
        let m = cover_measure_check(&CountableSet::canonical(), 12, 12).unwrap();
        assert!(m.holds);
        assert_eq!(m.centres.len(), 13);
        // {0} gives 1/4, member n gives 2^-(n+4); twelve of thirteen fit
        let want = Rational::new(1, 4)
            + (0..11).fold(Rational::zero(), |a, n| a + Rational::pow2_neg(n + 4));
        assert_eq!(m.max_total, want);
    }
}
