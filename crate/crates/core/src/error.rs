use thiserror::Error;

use crate::exact::DyadicInterval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbyssError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not pointwise evaluable: {0}")]
    NotEvaluable(String),
    #[error("unsound query refused: {shape} needs {needs} ({anchor})")]
    Refused {
        shape: String,
        needs: String,
        anchor: String,
    },
    #[error("fuel exhausted after {spent} evaluations{}", best_suffix(.best))]
    FuelExhausted {
        spent: u64,
        best: Option<Box<DyadicInterval>>,
    },
    #[error("degenerate interval: {0}")]
    Degenerate(String),
    #[error("constructor error: {0}")]
    Constructor(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("representation insufficient: {0}")]
    RepresentationInsufficient(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("oracle inconsistency: {0}")]
    OracleInconsistent(String),
    #[error("sets intersect: {0}")]
    Intersecting(String),
    #[error("parse error: {0}")]
    Parse(String),
}

fn best_suffix(best: &Option<Box<DyadicInterval>>) -> String {
    match best {
        Some(i) => format!(", best interval {i:?}"),
        None => String::new(),
    }
}

impl AbyssError {
    pub fn fuel(spent: u64, best: Option<DyadicInterval>) -> Self {
        AbyssError::FuelExhausted {
            spent,
            best: best.map(Box::new),
        }
    }
}
