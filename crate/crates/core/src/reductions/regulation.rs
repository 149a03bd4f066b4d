use super::{certify, Realiser};
use crate::algorithms::NestedStage;
use crate::algorithms::{modulus_regulation, regulation_violation};
use crate::error::AbyssError;
use crate::exact::{Rational, Surd};
use crate::universe::{CountableSet, SymbolicFn};

type RegFn = dyn Fn(&Surd, u32) -> Result<u64, AbyssError>;

/// `M(x, k)`, a claimed modulus of regulation for a penny function.
pub struct RegulationOracle {
    name: String,
    inner: Box<RegFn>,
}

impl std::fmt::Debug for RegulationOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RegulationOracle({})", self.name)
    }
}

impl RegulationOracle {
    pub fn from_fn(
        name: &str,
        f: impl Fn(&Surd, u32) -> Result<u64, AbyssError> + 'static,
    ) -> Self {
        RegulationOracle {
            name: name.into(),
            inner: Box::new(f),
        }
    }

    /// The searched modulus of the penny function of `set`.
    pub fn canonical(set: CountableSet, fuel: u64) -> Result<Self, AbyssError> {
        let m = modulus_regulation(&SymbolicFn::Penny { set }, fuel)?;
        Ok(Self::from_fn("canonical", move |x, k| m.at(x, k)))
    }

    pub fn constant(m: u64) -> Self {
        Self::from_fn(&format!("constant {m}"), move |_, _| Ok(m))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn query(&self, x: &Surd, k: u32) -> Result<u64, AbyssError> {
        (self.inner)(x, k)
    }
}

/// Nested closed intervals through the dense open sets `O_j = {f < 2^-(j+1)}`
/// of the penny function, `O_j` presented by the balls
/// `B(y, 2^-(M(y, j+3)+1))` around its points. Stage `j` misses every member
/// of index at most `j`.
pub fn realiser_from_regulation_modulus(
    oracle: &RegulationOracle,
    set: &CountableSet,
    k: u32,
    cert: u64,
    fuel: u64,
) -> Result<Realiser, AbyssError> {
    set.validate()?;
    let f = SymbolicFn::Penny { set: set.clone() };
    let levels = u32::try_from(u64::from(k).max(cert + 1))
        .map_err(|_| AbyssError::Domain("too many levels".into()))?;
    let probe = fuel.max(cert);
    let (interval, stages) = crate::algorithms::nested_stages(levels, k, fuel, |j, y| {
        let ys = Surd::from(y);
        if f.eval(&ys)? >= Surd::from(Rational::pow2_neg(j + 1)) {
            return Ok(None);
        }
        let m = oracle.query(&ys, j + 3)?;
        let m32 = u32::try_from(m).map_err(|_| {
            AbyssError::InvalidModulus(format!("M({y}, {}) = {m} is out of range", j + 3))
        })?;
        if let Some(why) = regulation_violation(&f, &ys, j + 3, m32, probe)? {
            return Err(AbyssError::InvalidModulus(format!(
                "M({y}, {}) = {m}: {why}",
                j + 3
            )));
        }
        Ok(Some((
            Rational::pow2_neg(m32 + 1),
            format!("M({y}, {}) = {m}", j + 3),
        )))
    })?;
    let point = interval.midpoint();
    let checks = certify(set, cert, &point, |n| stages[n as usize].interval.clone())?;
    let mut transcript = vec![format!("modulus {}", oracle.name())];
    transcript.extend(
        stages
            .iter()
            .map(|s: &NestedStage| format!("stage {}: {:?} ({})", s.level, s.interval, s.note)),
    );
    Ok(Realiser {
        method: "regulation",
        point,
        interval,
        certified_upto: cert,
        checks,
        extracted: Vec::new(),
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_modulus_realises() {
        let set = CountableSet::canonical();
        let m = RegulationOracle::canonical(set.clone(), 64).unwrap();
        let r = realiser_from_regulation_modulus(&m, &set, 16, 16, 64).unwrap();
        assert!(r.verify());
        assert_eq!(r.checks.len(), 17);
    }

    #[test]
    fn singleton_after_one_level() {
        let a = Surd::sqrt_half_scaled(1);
        let set = CountableSet::finite(vec![a.clone()]).unwrap();
        let m = RegulationOracle::canonical(set.clone(), 64).unwrap();
        let r = realiser_from_regulation_modulus(&m, &set, 2, 0, 64).unwrap();
        assert!(!r.checks[0].excluded_by.contains(&a));
    }

    #[test]
    fn zero_is_not_a_modulus() {
        let set = CountableSet::canonical();
        match realiser_from_regulation_modulus(&RegulationOracle::constant(0), &set, 8, 8, 64) {
            Err(AbyssError::InvalidModulus(msg)) => assert!(msg.contains("limit"), "{msg}"),
            other => panic!("expected invalid modulus, got {other:?}"),
        }
    }
}
