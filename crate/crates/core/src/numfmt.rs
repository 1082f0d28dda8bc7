//! Fixed-precision number output for JSON documents.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

fn raw<S: Serializer>(x: f64, digits: usize, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return s.serialize_none();
    }
    let text = format!("{:.*e}", digits - 1, x);
    let raw = RawValue::from_string(text).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

/// Amplitude-grade value: 17 significant digits, enough to round-trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exact(pub f64);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        raw(self.0, 17, s)
    }
}

/// Derived scalar: 12 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar(pub f64);

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        raw(self.0, 12, s)
    }
}

pub fn scalar_text(x: f64) -> String {
    format!("{:.11e}", x)
}
