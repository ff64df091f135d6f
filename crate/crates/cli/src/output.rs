//! Rendering of command results as JSON or CSV.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// Output format shared by every subcommand.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Formats a float with at most 12 significant digits.
pub fn fmt12(x: f64) -> String {
    let r = sig12(x);
    if r != 0.0 && r.is_finite() && !(1e-6..1e15).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(sig12(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with floats rounded to 12 significant digits.
pub fn write_json<T: Serialize, W: Write + ?Sized>(out: &mut W, value: &T) -> anyhow::Result<()> {
    let mut v = serde_json::to_value(value)?;
    round_floats(&mut v);
    serde_json::to_writer_pretty(&mut *out, &v)?;
    writeln!(out)?;
    Ok(())
}

/// One JSON object per line, floats rounded.
pub fn write_jsonl<T: Serialize, W: Write + ?Sized>(out: &mut W, rows: &[T]) -> anyhow::Result<()> {
    for row in rows {
        let mut v = serde_json::to_value(row)?;
        round_floats(&mut v);
        writeln!(out, "{}", serde_json::to_string(&v)?)?;
    }
    Ok(())
}

/// Writes a header and rows of already formatted cells.
pub fn write_csv<W: Write + ?Sized>(out: &mut W, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn opt_f(x: Option<f64>) -> String {
    x.map_or(String::new(), fmt12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(2.0), "2");
        assert_eq!(fmt12(123456.789012345), "123456.789012");
        assert_eq!(fmt12(1e-20 / 3.0), "3.33333333333e-21");
        assert_eq!(fmt12(-2.5e16), "-2.5e16");
        assert_eq!(fmt12(0.0), "0");
    }
}
