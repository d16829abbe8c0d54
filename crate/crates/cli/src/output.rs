use serde::Serialize;
use serde_json::Value;

use std::io::Write;

use crate::error::{CliError, CliResult};

/// Rounds every float to 15 significant digits.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let r: f64 = if x == 0.0 || !x.is_finite() {
                x
            } else {
                format!("{x:.14e}").parse().expect("formatted float")
            };
            serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let v = serde_json::to_value(value).expect("serializable report");
    Ok(serde_json::to_string_pretty(&round_value(v)).expect("json value"))
}

pub fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    write_stdout(text.as_bytes())
}

/// Writes to stdout; a closed pipe is not an error.
pub fn write_stdout(bytes: &[u8]) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(bytes).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
            path: "stdout".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

pub fn csv_row(values: &[f64]) -> String {
    let cells: Vec<String> = values
        .iter()
        .map(|x| match format!("{x:.6}") {
            z if z == "-0.000000" => "0.000000".to_string(),
            s => s,
        })
        .collect();
    cells.join(",")
}
