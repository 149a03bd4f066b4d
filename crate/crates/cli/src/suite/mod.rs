//! The seeded acceptance suite behind `abyss selftest`. Every criterion
//! compares library output with brute-force values computed from the raw
//! instance parameters; the transcript holds no timings, so a seed fixes it
//! byte for byte.

mod brute;
mod criteria;
mod gen;

use rand::SeedableRng;
use serde::Serialize;
use serde_json::Value;

use gen::Rng8;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Criteria run in process; the last one compares two transcripts and is
/// left to whoever runs the binary twice.
pub const CRITERIA: [u32; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub checks: u64,
    pub failed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub pass: bool,
    pub criteria: Vec<CriterionReport>,
}

/// Pass/fail bookkeeping with the first few failure messages kept.
#[derive(Default)]
pub(crate) struct Tally {
    checks: u64,
    failed: u64,
    failures: Vec<String>,
}

impl Tally {
    pub(crate) fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 12 {
                self.failures.push(what());
            }
        }
    }

    pub(crate) fn finish(self, id: u32, name: &'static str, detail: Value) -> CriterionReport {
        CriterionReport {
            id,
            name,
            pass: self.failed == 0 && self.checks > 0,
            checks: self.checks,
            failed: self.failed,
            failures: self.failures,
            detail,
        }
    }
}

pub fn run_criterion(id: u32, seed: u64) -> CriterionReport {
    let mut rng = Rng8::seed_from_u64(seed ^ u64::from(id).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    match id {
        1 => criteria::sup_inf_bisection(&mut rng),
        2 => criteria::penny_oscillation(&mut rng),
        3 => criteria::continuity_points(&mut rng),
        4 => criteria::cousin_covers(&mut rng),
        5 => criteria::jordan_split(&mut rng),
        6 => criteria::naive_baseline(),
        7 => criteria::realisers(&mut rng),
        8 => criteria::collapse_soundness(&mut rng),
        _ => Tally::default().finish(id, "unknown", Value::Null),
    }
}

pub fn run_all(seed: u64) -> SuiteReport {
    let criteria: Vec<CriterionReport> =
        CRITERIA.iter().map(|&id| run_criterion(id, seed)).collect();
    SuiteReport {
        seed,
        pass: criteria.iter().all(|c| c.pass),
        criteria,
    }
}
