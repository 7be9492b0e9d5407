//! Deterministic command reports.
//!
//! A report is an ordered JSON object. Keys keep insertion order and
//! floating-point values print in shortest round-trip form, so identical
//! inputs give byte-identical output. Reports carry no timestamps.

use discord_core::qstate::ComplexMatrix;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Default)]
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.set("command", command);
        r.set("version", env!("CARGO_PKG_VERSION"));
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone()))
            .expect("report values are serializable");
        s.push('\n');
        s
    }

    /// `key: value` lines; nested objects flatten to dotted keys and arrays
    /// print as compact JSON.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        flatten("", &Value::Object(self.fields.clone()), &mut out);
        out
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

/// Finite floats become numbers; NaN and infinities become strings so the
/// report stays valid JSON.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(x.to_string()), Value::Number)
}

pub fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn vector(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|&z| complex(z)).collect())
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    let part = |f: fn(&Complex64) -> f64| -> Value {
        Value::Array(
            (0..m.rows())
                .map(|i| Value::Array((0..m.cols()).map(|j| num(f(&m[(i, j)]))).collect()))
                .collect(),
        )
    };
    json!({ "re": part(|z| z.re), "im": part(|z| z.im) })
}

pub fn reals(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_keep_insertion_order() {
        let mut r = Report::new("demo");
        r.set("zeta", 1).set("alpha", num(0.5));
        let text = r.to_text();
        assert_eq!(text, "command: demo\nversion: 0.1.0\nzeta: 1\nalpha: 0.5\n");
        assert!(r.to_json().find("zeta").unwrap() < r.to_json().find("alpha").unwrap());
    }

    #[test]
    fn non_finite_values_stay_valid_json() {
        let mut r = Report::new("demo");
        r.set("x", num(f64::NAN));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["x"], "NaN");
    }
}
