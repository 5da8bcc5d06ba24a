//! JSON and CSV emission with a fixed number of significant digits.

use serde::Serialize;
use serde_json::{Number, Value};

use crate::Failure;

pub const SIG_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

pub fn fmt_float(x: f64) -> String {
    let r = round_sig(x);
    if r != 0.0 && r.is_finite() && !(1e-4..1e15).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(round_value).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let v = serde_json::to_value(value).map_err(|e| Failure(e.to_string()))?;
    serde_json::to_string_pretty(&round_value(v)).map_err(|e| Failure(e.to_string()))
}

pub fn csv_row<I: IntoIterator<Item = f64>>(xs: I) -> String {
    xs.into_iter().map(fmt_float).collect::<Vec<_>>().join(",")
}

pub fn matrix_csv(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|r| csv_row(r.iter().copied()))
        .collect::<Vec<_>>()
        .join("\n")
}
