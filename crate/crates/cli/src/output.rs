//! Output formatting: every float is rounded to 12 significant digits
//! before printing, for reproducible diffs in golden-file tests.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

/// Rounds to 12 significant digits (the value round-trips through its
/// scientific representation).
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific form parses")
}

/// Shortest decimal form of the 12-digit rounding, for CSV cells.
pub fn fmt12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{}", round_sig12(x))
}

struct Sig12Formatter;

impl Formatter for Sig12Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        CompactFormatter.write_f64(writer, round_sig12(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        CompactFormatter.write_f64(writer, round_sig12(value as f64))
    }
}

/// Serialises to single-line JSON with 12-significant-digit floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, Sig12Formatter);
    value
        .serialize(&mut ser)
        .expect("in-memory serialisation cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}
