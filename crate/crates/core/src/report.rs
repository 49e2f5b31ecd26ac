//! Serialization helpers shared by every report type.
//!
//! JSON reports are pretty-printed with a fixed field order; CSV reports
//! always start with a header row. Non-finite ratios are written as the
//! strings `"inf"`, `"-inf"` or `"nan"` since JSON has no literal for them.

use std::io::Write;

use serde::Serializer;

pub fn f64_or_inf<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// Formats a float for CSV so that it round-trips (`ryu` shortest form).
pub fn csv_f64(v: f64) -> String {
    if v.is_finite() {
        let mut buf = ryu_like(v);
        if !buf.contains(['.', 'e', 'E']) {
            buf.push_str(".0");
        }
        buf
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn ryu_like(v: f64) -> String {
    // serde_json prints floats with the shortest round-trip representation
    serde_json::Number::from_f64(v).map_or_else(|| v.to_string(), |n| n.to_string())
}

/// Writes a header row and records to any writer.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
