//! Command reports, rendered as text or as versioned JSON.

use posmap::{ComplexMatrix, SuperMap, C64};
use serde_json::{json, Map, Value};

use crate::mapfile::to_map_value;

pub const SCHEMA_VERSION: u64 = 1;

/// Rounds to 12 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // avoid "-0.0" in reports
    json!(if rounded == 0.0 { 0.0 } else { rounded })
}

pub fn complex(z: C64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn vector(v: &[C64]) -> Value {
    Value::Array(v.iter().copied().map(complex).collect())
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| Value::Array((0..m.cols()).map(|c| complex(m[(r, c)])).collect()))
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "data": rows })
}

pub fn map(m: &SuperMap) -> Value {
    to_map_value(m, num)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub args: Value,
    pub status: String,
    pub exit_code: i32,
    /// Human-readable findings, one per line.
    pub summary: Vec<String>,
    pub values: Map<String, Value>,
    pub witness: Option<Value>,
    pub seed: u64,
    pub tolerances: Value,
    pub wall_time: f64,
}

impl Report {
    pub fn new(command: &str, args: Value, seed: u64, tolerances: Value) -> Self {
        Self {
            command: command.to_string(),
            args,
            status: String::new(),
            exit_code: 0,
            summary: Vec::new(),
            values: Map::new(),
            witness: None,
            seed,
            tolerances,
            wall_time: 0.0,
        }
    }

    pub fn status(&mut self, status: &str, exit_code: i32) {
        self.status = status.to_string();
        self.exit_code = exit_code;
    }

    pub fn value(&mut self, key: &str, v: Value) {
        self.values.insert(key.to_string(), v);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "args": self.args,
            "status": self.status,
            "exit_code": self.exit_code,
            "summary": self.summary,
            "values": Value::Object(self.values.clone()),
            "witness": self.witness.clone().unwrap_or(Value::Null),
            "seed": self.seed,
            "tolerances": self.tolerances,
            // microsecond resolution; excluded from determinism comparisons
            "wall_time": (self.wall_time * 1e6).round() / 1e6,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.status);
        for line in &self.summary {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        for (k, v) in &self.values {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("  witness = {w}\n"));
        }
        out.push_str(&format!(
            "  seed = {}, wall time = {:.3} s\n",
            self.seed, self.wall_time
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(num(1.0 / 3.0), json!(0.333333333333));
        assert_eq!(num(-1.0 + 1e-15), json!(-1.0));
        assert_eq!(num(-1e-300 * 1e-300), json!(0.0));
        assert_eq!(num(f64::INFINITY), Value::Null);
        assert_eq!(num(123456.7890123456), json!(123456.789012));
    }

    #[test]
    fn json_has_schema_version() {
        let r = Report::new("pair", json!({}), 3, json!({}));
        let v = r.to_json();
        assert_eq!(v["schema"], json!(1));
        assert_eq!(v["seed"], json!(3));
        assert_eq!(v["witness"], Value::Null);
    }
}
