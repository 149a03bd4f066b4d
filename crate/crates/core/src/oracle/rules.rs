use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::AbyssError;
use crate::universe::ClassSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    OscBelow,
    ValueBelowOnBall,
    ExistsValueAbove,
    ExistsValueBelow,
    Baire1Above,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 5] = [
        ShapeKind::OscBelow,
        ShapeKind::ValueBelowOnBall,
        ShapeKind::ExistsValueAbove,
        ShapeKind::ExistsValueBelow,
        ShapeKind::Baire1Above,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::OscBelow => "osc_below",
            ShapeKind::ValueBelowOnBall => "value_below_on_ball",
            ShapeKind::ExistsValueAbove => "exists_value_above",
            ShapeKind::ExistsValueBelow => "exists_value_below",
            ShapeKind::Baire1Above => "baire1_above",
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeKind {
    type Err = AbyssError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ShapeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AbyssError::Parse(format!("unknown query shape '{s}'")))
    }
}

/// A licensed rewrite of a real quantifier into a rational one.
#[derive(Clone, Debug, Serialize)]
pub struct CollapseRule {
    pub shape: ShapeKind,
    pub real_form: &'static str,
    pub rational_form: &'static str,
    #[serde(serialize_with = "ser_tags")]
    pub needs: ClassSet,
    pub precondition: &'static str,
    pub anchor: &'static str,
}

fn ser_tags<S: serde::Serializer>(t: &ClassSet, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.names())
}

pub static RULES: &[CollapseRule] = &[
    CollapseRule {
        shape: ShapeKind::OscBelow,
        real_form: "(∃N)(∀y,z ∈ B(x,2^-N)) |f(y) - f(z)| < b",
        rational_form: "(∃N)(∀q,r ∈ B(x,2^-N) ∩ ℚ) |f(q) - f(r)| < b",
        needs: ClassSet::RATIONAL_EXTREMA,
        precondition: "quasi-continuous, or extrema on open balls attained along rationals",
        anchor: "quasi-continuity: every value is approached on an open set, so rational points see the oscillation; the same N serves both forms",
    },
    CollapseRule {
        shape: ShapeKind::OscBelow,
        real_form: "(∃N)(∀y,z ∈ B(x,2^-N)) |f(y) - f(z)| < b",
        rational_form: "(∃N)(∀q ∈ B(x,2^-N) ∩ ℚ) f(x) - f(q) < b",
        needs: ClassSet::USCO,
        precondition: "upper semi-continuous",
        anchor: "usco: the sup on small balls tends to f(x) and {f < c} is open, so the inf is attained along rationals",
    },
    CollapseRule {
        shape: ShapeKind::ValueBelowOnBall,
        real_form: "(∃N)(∀y ∈ B(x,2^-N)) f(y) >= q",
        rational_form: "(∃N)(∀r ∈ B(x,2^-N) ∩ ℚ) f(r) >= q",
        needs: ClassSet::USCO,
        precondition: "upper semi-continuous",
        anchor: "usco: {f < q} is open, so if it meets a ball it meets it in a rational; the same N serves both forms",
    },
    CollapseRule {
        shape: ShapeKind::ExistsValueAbove,
        real_form: "(∃x ∈ [p,q]) f(x) > y",
        rational_form: "(∃r ∈ [p,q] ∩ ℚ) f(r) > y",
        needs: ClassSet::RATIONAL_EXTREMA,
        precondition: "quasi-continuous, or extrema on rational intervals attained along rationals",
        anchor: "quasi-continuity: a point above y has an open set above y nearby, which holds a rational",
    },
    CollapseRule {
        shape: ShapeKind::ExistsValueBelow,
        real_form: "(∃x ∈ [p,q]) f(x) < y",
        rational_form: "(∃r ∈ [p,q] ∩ ℚ) f(r) < y",
        needs: ClassSet::USCO,
        precondition: "upper semi-continuous",
        anchor: "usco: {f < y} is open, so when it meets [p,q] it holds a rational; interval halving then finds the inf",
    },
    CollapseRule {
        shape: ShapeKind::ExistsValueBelow,
        real_form: "(∃x ∈ [p,q]) f(x) < y",
        rational_form: "(∃r ∈ [p,q] ∩ ℚ) f(r) < y",
        needs: ClassSet::RATIONAL_EXTREMA,
        precondition: "quasi-continuous, or extrema on rational intervals attained along rationals",
        anchor: "quasi-continuity: a point below y has an open set below y nearby, which holds a rational",
    },
    CollapseRule {
        shape: ShapeKind::Baire1Above,
        real_form: "(∃x ∈ [p,q]) lim f_n(x) > y",
        rational_form: "(∃r ∈ [p,q] ∩ ℚ) f_{m(r)}(r) > y, or the same at a listed anchor point",
        needs: ClassSet::BAIRE1,
        precondition: "limit of continuous functions given with the sequence and a convergence modulus m",
        anchor: "with a modulus the inner limit is a single evaluation, leaving an arithmetical formula",
    },
];

/// Why a shape is refused for a class, when there is a telling reason.
fn refusal_anchor(shape: ShapeKind, tags: ClassSet) -> &'static str {
    match shape {
        ShapeKind::ExistsValueAbove if tags.contains(ClassSet::USCO) => {
            "usco: the rational rewrite holds for '<' but fails for '>' (a penny function is 0 on all rationals)"
        }
        ShapeKind::OscBelow if tags.contains(ClassSet::CLIQUISH) => {
            "cliquish: rational points can miss the oscillation at a set member (a penny function looks constant on ℚ)"
        }
        _ => "no rational rewrite is known to be sound for this class",
    }
}

/// The rule admitting `shape` for a function with `tags`.
pub fn rule_for(shape: ShapeKind, tags: ClassSet) -> Result<&'static CollapseRule, AbyssError> {
    let candidates: Vec<&CollapseRule> = RULES.iter().filter(|r| r.shape == shape).collect();
    if let Some(r) = candidates.iter().find(|r| tags.contains(r.needs)) {
        return Ok(r);
    }
    let needs = candidates
        .iter()
        .map(|r| r.precondition)
        .collect::<Vec<_>>()
        .join(" or ");
    Err(AbyssError::Refused {
        shape: shape.name().into(),
        needs,
        anchor: refusal_anchor(shape, tags).into(),
    })
}

/// All rules for a shape, by name.
pub fn collapse_rule(shape: &str) -> Result<Vec<&'static CollapseRule>, AbyssError> {
    let kind: ShapeKind = shape.parse()?;
    Ok(RULES.iter().filter(|r| r.shape == kind).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usco_below_is_licensed_and_above_is_not() {
        let usco = ClassSet::USCO | ClassSet::CLIQUISH;
        assert_eq!(
            rule_for(ShapeKind::ExistsValueBelow, usco).unwrap().needs,
            ClassSet::USCO
        );
        match rule_for(ShapeKind::ExistsValueAbove, usco) {
            Err(AbyssError::Refused { anchor, .. }) => assert!(anchor.contains("'>'")),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn cliquish_oscillation_is_refused() {
        assert!(rule_for(ShapeKind::OscBelow, ClassSet::CLIQUISH).is_err());
        assert!(collapse_rule("no_such_shape").is_err());
        assert_eq!(collapse_rule("osc_below").unwrap().len(), 2);
    }
}
