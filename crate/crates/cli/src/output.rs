//! Deterministic text output: JSON with reals at 15 significant digits and
//! RFC 4180 CSV with LF line endings.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Rounds to 15 significant digits; non-finite values pass through.
pub fn round15(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.14e}").parse().expect("formatted float parses")
}

/// Shortest text for the 15-digit rounding of `v`, in positional notation for
/// moderate magnitudes and scientific notation otherwise.
pub fn format_real(v: f64) -> String {
    let r = round15(v);
    if r == 0.0 || (1e-4..1e15).contains(&r.abs()) || !r.is_finite() {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(x) = n.as_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round15(x)) {
                        *n = rounded;
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with struct field order preserved and reals rounded.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types always serialize");
    round_value(&mut v);
    serde_json::to_string_pretty(&v).expect("values always serialize")
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    writeln!(out, "{}", to_json(value)).map_err(|e| CliError::io("<stdout>", e))
}

/// CSV text with the given header and one row per record.
pub fn csv_string<const N: usize>(header: &[&str; N], rows: impl IntoIterator<Item = [f64; N]>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|&v| format_real(v))).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is ASCII")
}
