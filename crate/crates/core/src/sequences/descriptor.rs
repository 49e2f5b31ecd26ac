//! JSON sequence descriptors: `{"family": "...", "params": {...}}`.
//!
//! | family                 | params                                                        |
//! |------------------------|---------------------------------------------------------------|
//! | `closed_form`          | `expr`: string in the index variable `n`                      |
//! | `alternating_harmonic` | `exponent` (default 1)                                        |
//! | `power_log`            | `amplitude` (default 1), `power` (default 1), `log_power` (default 0) |
//! | `counterexample`       | `p` > 1                                                       |
//! | `user_table`           | `values`: array of numbers or `[re, im]` pairs                |

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Family, Sequence, SequenceError};

const FAMILIES: [&str; 5] = [
    "closed_form",
    "alternating_harmonic",
    "power_log",
    "counterexample",
    "user_table",
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClosedFormParams {
    expr: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlternatingParams {
    #[serde(default = "one")]
    exponent: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerLogParams {
    #[serde(default = "one")]
    amplitude: f64,
    #[serde(default = "one")]
    power: f64,
    #[serde(default)]
    log_power: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CounterexampleJson {
    p: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableParams {
    values: Vec<TableValue>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum TableValue {
    Real(f64),
    Complex([f64; 2]),
}

fn one() -> f64 {
    1.0
}

/// Wire form of a [`Sequence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceDescriptor {
    pub family: String,
    #[serde(default)]
    pub params: Value,
}

impl SequenceDescriptor {
    pub fn from_json(text: &str) -> Result<Sequence, SequenceError> {
        let desc: SequenceDescriptor =
            serde_json::from_str(text).map_err(|e| SequenceError::Descriptor(e.to_string()))?;
        desc.build()
    }

    pub fn build(&self) -> Result<Sequence, SequenceError> {
        if !FAMILIES.contains(&self.family.as_str()) {
            return Err(SequenceError::UnknownFamily(self.family.clone()));
        }
        let params = match &self.params {
            Value::Null => json!({}),
            other => other.clone(),
        };
        match self.family.as_str() {
            "closed_form" => {
                let p: ClosedFormParams = parse_params(params)?;
                Sequence::closed_form(&p.expr)
            }
            "alternating_harmonic" => {
                let p: AlternatingParams = parse_params(params)?;
                Sequence::alternating_harmonic(p.exponent)
            }
            "power_log" => {
                let p: PowerLogParams = parse_params(params)?;
                Sequence::power_log(p.amplitude, p.power, p.log_power)
            }
            "counterexample" => {
                let p: CounterexampleJson = parse_params(params)?;
                Sequence::counterexample(p.p)
            }
            _ => {
                let p: TableParams = parse_params(params)?;
                Sequence::table(p.values.into_iter().map(|v| match v {
                    TableValue::Real(re) => Complex64::new(re, 0.0),
                    TableValue::Complex([re, im]) => Complex64::new(re, im),
                }))
            }
        }
    }

    pub fn describe(seq: &Sequence) -> SequenceDescriptor {
        let (family, params) = match seq.family() {
            Family::ClosedForm(expr) => ("closed_form", json!({ "expr": expr.source() })),
            Family::AlternatingHarmonic { exponent } => ("alternating_harmonic", json!({ "exponent": exponent })),
            Family::PowerLog {
                amplitude,
                power,
                log_power,
            } => (
                "power_log",
                json!({ "amplitude": amplitude, "power": power, "log_power": log_power }),
            ),
            Family::Counterexample(c) => ("counterexample", json!({ "p": c.p() })),
            Family::UserTable(values) => {
                let values: Vec<TableValue> = values
                    .iter()
                    .map(|v| {
                        if v.im == 0.0 {
                            TableValue::Real(v.re)
                        } else {
                            TableValue::Complex([v.re, v.im])
                        }
                    })
                    .collect();
                ("user_table", json!({ "values": values }))
            }
        };
        SequenceDescriptor {
            family: family.to_string(),
            params,
        }
    }
}

fn parse_params<T: for<'de> Deserialize<'de>>(params: Value) -> Result<T, SequenceError> {
    serde_json::from_value(params).map_err(|e| SequenceError::Descriptor(e.to_string()))
}
