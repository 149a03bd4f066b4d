//! Constructive reductions: Cantor realisers extracted from functionals
//! that are exact on the symbolic universe, and the rational-sampling
//! baselines that fail on the same instances.

mod baseline;
mod cliq;
mod diagonal;
mod regulation;
mod sup;

pub use baseline::{cover_measure_check, demo_abyss, naive_rational_sup, AbyssDemo, CoverMeasure};
pub use cliq::{realiser_from_cliq_modulus, CliqModulusOracle};
pub use diagonal::{cantor_diagonal, DiagonalPoint};
pub use regulation::{realiser_from_regulation_modulus, RegulationOracle};
pub use sup::{realiser_from_sup, Extraction, SupOracle};

use serde::Serialize;

use crate::error::AbyssError;
use crate::exact::{DyadicInterval, Rational, Surd};
use crate::universe::CountableSet;

/// A member of `A` together with the closed interval shown to miss it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberCheck {
    pub index: u64,
    pub member: Surd,
    pub excluded_by: DyadicInterval,
}

/// A point outside `A`, with the exclusion certificate for every member of
/// index at most `certified_upto`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Realiser {
    pub method: &'static str,
    pub point: Rational,
    pub interval: DyadicInterval,
    pub certified_upto: u64,
    pub checks: Vec<MemberCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extracted: Vec<Extraction>,
    pub transcript: Vec<String>,
}

impl Realiser {
    /// Re-checks the certificate: every listed interval contains the point
    /// and misses its member.
    pub fn verify(&self) -> bool {
        let p = Surd::from(&self.point);
        self.checks
            .iter()
            .all(|c| c.excluded_by.contains(&p) && !c.excluded_by.contains(&c.member))
    }
}

/// Checks each member of index `<= cert` against the interval `exclude(n)`
/// that is supposed to miss it.
pub(crate) fn certify(
    set: &CountableSet,
    cert: u64,
    point: &Rational,
    mut exclude: impl FnMut(u64) -> DyadicInterval,
) -> Result<Vec<MemberCheck>, AbyssError> {
    let p = Surd::from(point);
    let mut out = Vec::new();
    for (index, member) in set.members_upto(cert) {
        let excluded_by = exclude(index);
        if excluded_by.contains(&member) || !excluded_by.contains(&p) {
            return Err(AbyssError::OracleInconsistent(format!(
                "certificate fails for member {index} ({member}) against {excluded_by:?}"
            )));
        }
        out.push(MemberCheck {
            index,
            member,
            excluded_by,
        });
    }
    Ok(out)
}
