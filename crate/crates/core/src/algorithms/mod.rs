//! Oracle-relative algorithms on the symbolic universe.

mod bisect;
mod moduli;

pub use bisect::{certify_osc, inf_usco, is_continuous_at, osc_point, sup_baire1, sup_qc};
pub use moduli::{
    lsco_modulus_on_cf, modulus_continuity_qc, modulus_qc, modulus_regulation,
    regulation_violation, ContinuityModulus, ModulusSample, RegulationModulus, UscoModulus,
};
mod baire;

pub(crate) use baire::nested as nested_stages;
pub use baire::{point_of_continuity_qc, point_of_continuity_usco, ContinuityPoint, NestedStage};
mod rmcode;

pub use rmcode::{indicator_rep, rm_code_from_r2_baire1, usco_separator, RmBall, RmCode};
mod cousin;

pub use cousin::{cousin_subcover, covers_unit, CousinClass, CousinCover, CoverBall};
mod variation;

pub use variation::{
    jordan_nbv, jump_enum, limits_lr, total_variation_nbv, JordanPair, OneSidedLimits,
};
