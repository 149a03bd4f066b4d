use num_bigint::BigInt;
use serde::Serialize;

use super::diagonal::trisect;
use super::{certify, Realiser};
use crate::error::AbyssError;
use crate::exact::{DyadicInterval, Rational};
use crate::universe::{CountableSet, Region, SymbolicFn, View};

type SupFn = dyn Fn(&SymbolicFn, &Rational, &Rational) -> Result<Rational, AbyssError>;

/// `(f, p, q) -> sup f on [p, q]`. The exact oracle evaluates symbolically
/// over every point of the universe.
pub struct SupOracle {
    name: String,
    inner: Option<Box<SupFn>>,
}

impl SupOracle {
    pub fn exact() -> Self {
        SupOracle {
            name: "exact".into(),
            inner: None,
        }
    }

    pub fn from_fn(
        name: &str,
        f: impl Fn(&SymbolicFn, &Rational, &Rational) -> Result<Rational, AbyssError> + 'static,
    ) -> Self {
        SupOracle {
            name: name.into(),
            inner: Some(Box::new(f)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sup(&self, f: &SymbolicFn, p: &Rational, q: &Rational) -> Result<Rational, AbyssError> {
        if let Some(g) = &self.inner {
            return g(f, p, q);
        }
        let s = f
            .sup(&Region::closed_q(p, q), View::Full)?
            .ok_or_else(|| AbyssError::Domain(format!("[{p}, {q}] misses [0,1]")))?;
        s.to_rational()
            .ok_or_else(|| AbyssError::Unsupported(format!("irrational supremum {s}")))
    }
}

impl std::fmt::Debug for SupOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SupOracle({})", self.name)
    }
}

/// One located maximiser: its index read off the value, and the dyadic
/// interval found by halving.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub index: u64,
    pub value: Rational,
    pub interval: DyadicInterval,
    pub bits: String,
}

/// Least `b` with `2^b > 3^(j+1)`.
fn bits_for_round(j: usize) -> u32 {
    let target = BigInt::from(3).pow(j as u32 + 1);
    let mut b = 0u32;
    while BigInt::from(1) << b as usize <= target {
        b += 1;
    }
    b
}

/// Halves `[0,1]` `bits` times, following the half on which the sup still
/// equals `s` (left on ties).
fn locate(
    oracle: &SupOracle,
    f: &SymbolicFn,
    s: &Rational,
    bits: u32,
    log: &mut Vec<String>,
) -> Result<(DyadicInterval, String), AbyssError> {
    let mut cur = DyadicInterval::unit();
    let mut digits = String::with_capacity(bits as usize);
    for _ in 0..bits {
        let mid = cur.midpoint();
        let left = oracle.sup(f, cur.lower(), &mid)?;
        let right = oracle.sup(f, &mid, cur.upper())?;
        if left.clone().max(right.clone()) != *s {
            return Err(AbyssError::OracleInconsistent(format!(
                "halves of {cur:?} give {left} and {right}, the whole gives {s}"
            )));
        }
        if left == *s {
            cur = DyadicInterval::new(cur.lower().clone(), mid)?;
            digits.push('0');
        } else {
            cur = DyadicInterval::new(mid, cur.upper().clone())?;
            digits.push('1');
        }
    }
    log.push(format!(
        "located value {s} in {cur:?} after {bits} halvings"
    ));
    Ok((cur, digits))
}

/// Enumerates `A` by decreasing penny value through the sup oracle, then
/// diagonalises against the located intervals. Members of index at most
/// `cert` are certified outside the result; `k` is the output precision and
/// the minimum number of bits extracted per member.
pub fn realiser_from_sup(
    oracle: &SupOracle,
    set: &CountableSet,
    k: u32,
    cert: u64,
) -> Result<Realiser, AbyssError> {
    set.validate()?;
    let mut transcript = vec![format!("oracle {}", oracle.name())];
    let mut extracted: Vec<Extraction> = Vec::new();
    let mut current = set.clone();
    let mut last: Option<Rational> = None;
    loop {
        let f = SymbolicFn::Penny {
            set: current.clone(),
        };
        let s = oracle.sup(&f, &Rational::zero(), &Rational::one())?;
        if let Some(prev) = &last {
            if &s >= prev && !s.is_zero() {
                return Err(AbyssError::OracleInconsistent(format!(
                    "sup {s} after removing a member is not below the previous {prev}"
                )));
            }
        }
        if s.is_zero() {
            transcript.push("sup is 0: no members left".into());
            break;
        }
        let index = s
            .inverse_power_of_two()
            .and_then(|e| e.checked_sub(1))
            .map(u64::from)
            .ok_or_else(|| AbyssError::OracleInconsistent(format!("{s} is not a penny value")))?;
        if index > cert {
            transcript.push(format!("next value {s} has index {index} > {cert}: stop"));
            break;
        }
        let bits = bits_for_round(extracted.len()).max(k);
        let (interval, digits) = locate(oracle, &f, &s, bits, &mut transcript)?;
        extracted.push(Extraction {
            index,
            value: s.clone(),
            interval,
            bits: digits,
        });
        current = CountableSet::IndexAbove {
            base: Box::new(set.clone()),
            min: index + 1,
        };
        last = Some(s);
    }
    let d = trisect(extracted.len(), k, |n, t| {
        t.intersect(&extracted[n].interval).is_some()
    })?;
    let by_index = |n: u64| -> DyadicInterval {
        extracted
            .iter()
            .position(|e| e.index == n)
            .map_or_else(|| d.interval.clone(), |j| d.stages[j].clone())
    };
    let checks = certify(set, cert, &d.point, by_index)?;
    Ok(Realiser {
        method: "sup",
        point: d.point,
        interval: d.interval,
        certified_upto: cert,
        checks,
        extracted,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Surd;

    #[test]
    fn canonical_enumeration_in_order() {
        let set = CountableSet::canonical();
        let r = realiser_from_sup(&SupOracle::exact(), &set, 16, 16).unwrap();
        assert!(r.verify());
        let idx: Vec<u64> = r.extracted.iter().map(|e| e.index).collect();
        assert_eq!(idx, (0..=16).collect::<Vec<_>>());
        let first = &r.extracted[0];
        assert_eq!(first.value, Rational::new(1, 2));
        // 0.1011010100000100... is sqrt2/2
        assert_eq!(&first.bits[..16], "1011010100000100");
        assert!(first.interval.contains(&Surd::sqrt_half_scaled(0)));
    }

    #[test]
    fn singleton_and_bad_oracles() {
        let one = CountableSet::finite(vec![Surd::sqrt_half_scaled(0)]).unwrap();
        let r = realiser_from_sup(&SupOracle::exact(), &one, 8, 16).unwrap();
        assert_eq!(r.extracted.len(), 1);
        assert_ne!(Surd::from(&r.point), Surd::sqrt_half_scaled(0));
        let liar = SupOracle::from_fn("constant", |_, _, _| Ok(Rational::new(1, 2)));
        assert!(matches!(
            realiser_from_sup(&liar, &one, 8, 4),
            Err(AbyssError::OracleInconsistent(_))
        ));
        let shrinking = SupOracle::from_fn("halves", |_, p, q| {
            Ok(if (q - p) < Rational::one() {
                Rational::zero()
            } else {
                Rational::new(1, 2)
            })
        });
        assert!(realiser_from_sup(&shrinking, &one, 8, 4).is_err());
    }

    #[test]
    fn round_bits() {
        assert_eq!(bits_for_round(0), 2);
        assert_eq!(bits_for_round(1), 4);
    }
}
