use abyss::AbyssError;
use serde_json::{json, Value};

pub const SCHEMA: &str = "abyss/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// 2 for refusals, 3 for fuel exhaustion, 1 otherwise.
pub fn exit_code(e: &AbyssError) -> i32 {
    match e {
        AbyssError::Refused { .. } => 2,
        AbyssError::FuelExhausted { .. } => 3,
        _ => 1,
    }
}

fn error_kind(e: &AbyssError) -> &'static str {
    match e {
        AbyssError::Domain(_) => "domain",
        AbyssError::NotEvaluable(_) => "not_evaluable",
        AbyssError::Refused { .. } => "refused",
        AbyssError::FuelExhausted { .. } => "fuel_exhausted",
        AbyssError::Degenerate(_) => "degenerate",
        AbyssError::Constructor(_) => "constructor",
        AbyssError::Unsupported(_) => "unsupported",
        AbyssError::NotApplicable(_) => "not_applicable",
        AbyssError::RepresentationInsufficient(_) => "representation_insufficient",
        AbyssError::InvalidModulus(_) => "invalid_modulus",
        AbyssError::OracleInconsistent(_) => "oracle_inconsistent",
        AbyssError::Intersecting(_) => "intersecting",
        AbyssError::Parse(_) => "parse",
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

pub(crate) fn success(command: &str, input: Value, result: Value) -> Outcome {
    let v = json!({ "schema": SCHEMA, "command": command, "input": input, "result": result });
    Outcome {
        code: 0,
        stdout: render(&v),
        stderr: String::new(),
    }
}

pub(crate) fn failure(command: &str, input: Value, e: &AbyssError) -> Outcome {
    let mut err = json!({ "kind": error_kind(e), "message": e.to_string() });
    match e {
        AbyssError::Refused {
            shape,
            needs,
            anchor,
        } => {
            err["operation"] = json!(shape);
            err["needs"] = json!(needs);
            err["anchor"] = json!(anchor);
        }
        AbyssError::FuelExhausted { spent, best } => {
            err["spent"] = json!(spent);
            err["best"] = serde_json::to_value(best).expect("serialisable");
        }
        _ => {}
    }
    let v = json!({ "schema": SCHEMA, "command": command, "input": input, "error": err });
    Outcome {
        code: exit_code(e),
        stdout: render(&v),
        stderr: format!("abyss {command}: {e}\n"),
    }
}
