//! Short textual forms for functions and sets, next to the JSON schema.
//!
//! ```text
//! thomae | identity | zero | const:Q | step:X[:left]
//! penny[:SET] | penny-k:K[:SET] | tilde-penny[:SET]
//! cover-psi[:SET] | cover-psi-usco[:SET]
//! baire1-penny[:SET] | baire1-indicator:OPEN
//! SET  = canonical | prefix:N | points:P,P,...
//! OPEN = A..B,A..B,...
//! ```
//! Anything starting with `{` is read as JSON.

use super::closed::{ClosedSetRep, OpenUnion};
use super::func::SymbolicFn;
use super::piecewise::{Piecewise, Policy};
use super::seq::Baire1Seq;
use super::set::CountableSet;
use crate::error::AbyssError;
use crate::exact::{Rational, Surd};

const MAX_TEXT: usize = 1 << 16;

fn guard(text: &str) -> Result<&str, AbyssError> {
    if text.len() > MAX_TEXT {
        return Err(AbyssError::Parse("input too long".into()));
    }
    Ok(text.trim())
}

pub fn parse_set(text: &str) -> Result<CountableSet, AbyssError> {
    let text = guard(text)?;
    if text.starts_with('{') {
        let set: CountableSet =
            serde_json::from_str(text).map_err(|e| AbyssError::Parse(e.to_string()))?;
        set.validate()?;
        return Ok(set);
    }
    let (head, rest) = text.split_once(':').unwrap_or((text, ""));
    match head {
        "canonical" if rest.is_empty() => Ok(CountableSet::canonical()),
        "prefix" => {
            let n: u64 = rest
                .trim()
                .parse()
                .map_err(|_| AbyssError::Parse(format!("bad prefix length {rest:?}")))?;
            let set = CountableSet::canonical_prefix(n);
            set.validate()?;
            Ok(set)
        }
        "points" => CountableSet::finite(parse_points(rest)?),
        _ => Err(AbyssError::Parse(format!(
            "unknown set {text:?} (canonical, prefix:N, points:...)"
        ))),
    }
}

pub fn parse_points(text: &str) -> Result<Vec<Surd>, AbyssError> {
    let text = guard(text)?;
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(str::parse).collect()
}

pub fn parse_open(text: &str) -> Result<OpenUnion, AbyssError> {
    let text = guard(text)?;
    if text.starts_with('{') || text.starts_with('[') {
        return serde_json::from_str(text).map_err(|e| AbyssError::Parse(e.to_string()));
    }
    if text.is_empty() {
        return Ok(OpenUnion::empty());
    }
    let intervals = text
        .split(',')
        .map(|part| {
            let (a, b) = part
                .split_once("..")
                .ok_or_else(|| AbyssError::Parse(format!("expected A..B, got {part:?}")))?;
            Ok((a.parse::<Rational>()?, b.parse::<Rational>()?))
        })
        .collect::<Result<Vec<_>, AbyssError>>()?;
    OpenUnion::new(intervals)
}

/// `points:P,...` or `complement:OPEN`, or JSON.
pub fn parse_closed(text: &str) -> Result<ClosedSetRep, AbyssError> {
    let text = guard(text)?;
    let rep = if text.starts_with('{') {
        serde_json::from_str(text).map_err(|e| AbyssError::Parse(e.to_string()))?
    } else {
        match text.split_once(':') {
            Some(("points", rest)) => ClosedSetRep::FinitePointSet {
                points: parse_points(rest)?,
            },
            Some(("complement", rest)) => ClosedSetRep::ComplementOfR2Open {
                open: parse_open(rest)?,
            },
            _ => {
                return Err(AbyssError::Parse(format!(
                    "unknown closed set {text:?} (points:..., complement:...)"
                )))
            }
        }
    };
    rep.validate()?;
    Ok(rep)
}

fn set_or_canonical(rest: Option<&str>) -> Result<CountableSet, AbyssError> {
    rest.map_or_else(|| Ok(CountableSet::canonical()), parse_set)
}

/// A function from its short form or JSON, validated.
pub fn parse_function(text: &str) -> Result<SymbolicFn, AbyssError> {
    let text = guard(text)?;
    if text.starts_with('{') {
        return SymbolicFn::from_json(text);
    }
    let (head, rest) = match text.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (text, None),
    };
    let f = match (head, rest) {
        ("thomae", None) => SymbolicFn::Thomae,
        ("identity", None) => SymbolicFn::identity(),
        ("zero", None) => SymbolicFn::zero(),
        ("const", Some(q)) => SymbolicFn::constant(q.parse()?),
        ("step", Some(r)) => {
            let (at, policy) = match r.rsplit_once(':') {
                Some((at, "left")) => (at, Policy::Left),
                Some((at, "right")) => (at, Policy::Right),
                _ => (r, Policy::Right),
            };
            SymbolicFn::Piecewise(Piecewise::step(
                at.parse()?,
                Surd::zero(),
                Surd::one(),
                policy,
            )?)
        }
        ("penny", r) => SymbolicFn::Penny {
            set: set_or_canonical(r)?,
        },
        ("penny-k", Some(r)) => {
            let (k, set) = match r.split_once(':') {
                Some((k, s)) => (k, Some(s)),
                None => (r, None),
            };
            let k = k
                .trim()
                .parse()
                .map_err(|_| AbyssError::Parse(format!("bad k {k:?}")))?;
            SymbolicFn::PennyK {
                set: set_or_canonical(set)?,
                k,
            }
        }
        ("tilde-penny", r) => SymbolicFn::TildePenny {
            set: set_or_canonical(r)?,
        },
        ("cover-psi", r) => SymbolicFn::CoverPsi {
            set: set_or_canonical(r)?,
            usco: false,
        },
        ("cover-psi-usco", r) => SymbolicFn::CoverPsi {
            set: set_or_canonical(r)?,
            usco: true,
        },
        ("baire1-penny", r) => SymbolicFn::Baire1 {
            seq: Baire1Seq::Spikes {
                set: set_or_canonical(r)?,
            },
            with_modulus: true,
        },
        ("baire1-indicator", Some(r)) => SymbolicFn::Baire1 {
            seq: Baire1Seq::Ramps {
                open: parse_open(r)?,
            },
            with_modulus: true,
        },
        _ => return Err(AbyssError::Parse(format!("unknown function {text:?}"))),
    };
    f.validate()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_forms() {
        assert_eq!(parse_function("thomae").unwrap(), SymbolicFn::Thomae);
        assert_eq!(
            parse_function("const:1/3")
                .unwrap()
                .eval(&Surd::zero())
                .unwrap(),
            Surd::from(Rational::new(1, 3))
        );
        let s = parse_function("step:1/2").unwrap();
        assert_eq!(
            s.eval(&Surd::from(Rational::new(1, 2))).unwrap(),
            Surd::one()
        );
        let s = parse_function("step:1/2:left").unwrap();
        assert!(s.eval(&Surd::from(Rational::new(1, 2))).unwrap().is_zero());
        match parse_function("penny-k:3:prefix:5").unwrap() {
            SymbolicFn::PennyK { k: 3, set } => assert_eq!(set, CountableSet::canonical_prefix(5)),
            other => panic!("{other:?}"),
        }
        let p = parse_function("penny:points:1/2*sqrt2,1/4*sqrt2").unwrap();
        assert_eq!(
            p.eval(&Surd::sqrt_half_scaled(1)).unwrap(),
            Surd::from(Rational::new(1, 4))
        );
        assert!(parse_function("baire1-indicator:1/4..3/4").is_ok());
    }

    #[test]
    fn json_round_trip() {
        let f = parse_function("cover-psi-usco:prefix:3").unwrap();
        assert_eq!(parse_function(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn rejects() {
        for bad in [
            "",
            "thomae:1",
            "const:",
            "penny:prefix:x",
            "step:2",
            "penny:points:1/2,1/2",
            "{",
            "nope",
            "baire1-indicator:1/4",
        ] {
            assert!(parse_function(bad).is_err(), "{bad:?}");
        }
        assert!(parse_closed("points:1/3,2/3").is_ok());
        assert!(parse_closed("complement:0..1/2").is_ok());
        assert!(parse_open("1/2..1/4").is_err());
        assert!(parse_open(r#"{"intervals":[["1/2","1/4"]]}"#).is_err());
        let merged = parse_open(r#"{"intervals":[["1/2","3/4"],["0","5/8"]]}"#).unwrap();
        assert_eq!(
            merged.intervals(),
            &[(Rational::zero(), Rational::new(3, 4))]
        );
    }
}
