//! Reports and their text and JSON renderings.
//!
//! JSON reports are objects with the fields `command`, `input_sha256`
//! (`null` without an input file), `results`, `violations` and, with
//! `--timings`, `timings` (milliseconds). Rationals are strings `"p/q"`.

use std::fmt::Write as _;
use std::process::ExitCode;

use minkowski::{CoordVector, Error, GramMatrix, Rational, UnimodularTransform};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    /// A checked claim was falsified.
    Falsified = 1,
    Usage = 2,
    /// Input is not a valid form (not symmetric, not positive definite, ...).
    Invalid = 3,
    /// An internal iteration or search cap was exceeded.
    Cap = 4,
}

impl Exit {
    pub fn for_error(e: &Error) -> Exit {
        match e {
            Error::NotSquare { .. }
            | Error::NotSymmetric { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::NotUnimodular { .. }
            | Error::LinearlyDependent { .. }
            | Error::NotPrimitive
            | Error::NotReduced(_) => Exit::Invalid,
            Error::IterationCap { .. } | Error::CoordinateOverflow => Exit::Cap,
            _ => Exit::Usage,
        }
    }

    pub fn code(self) -> ExitCode {
        ExitCode::from(self as u8)
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rationals<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(rs.into_iter().map(rational).collect())
}

pub fn vector(v: &CoordVector) -> Value {
    Value::Array(v.as_slice().iter().map(|&x| Value::from(x)).collect())
}

pub fn scalar_vector(v: &CoordVector) -> String {
    scalar(&vector(v))
}

pub fn vectors<'a>(vs: impl IntoIterator<Item = &'a CoordVector>) -> Value {
    Value::Array(vs.into_iter().map(vector).collect())
}

pub fn gram(g: &GramMatrix) -> Value {
    let m = g.entries();
    Value::Array((0..m.rows()).map(|i| rationals(m.row(i))).collect())
}

pub fn transform(t: &UnimodularTransform) -> Value {
    let m = t.entries();
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|v| Value::String(v.to_string())).collect()))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub input_sha256: Option<String>,
    pub results: Map<String, Value>,
    pub violations: Vec<String>,
    pub timings: Vec<(String, f64)>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            input_sha256: None,
            results: Map::new(),
            violations: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn violation(&mut self, message: impl Into<String>) -> &mut Self {
        self.violations.push(message.into());
        self
    }

    pub fn to_json(&self, timings: bool) -> String {
        let mut v = json!({
            "command": self.command,
            "input_sha256": self.input_sha256,
            "results": self.results,
            "violations": self.violations,
        });
        if timings {
            let t: Map<String, Value> = self.timings.iter().map(|(k, ms)| (k.clone(), json!(ms))).collect();
            v["timings"] = Value::Object(t);
        }
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self, timings: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(h) = &self.input_sha256 {
            let _ = writeln!(out, "input_sha256: {h}");
        }
        for (k, v) in &self.results {
            write_value(&mut out, k, v, 0);
        }
        for v in &self.violations {
            let _ = writeln!(out, "violation: {v}");
        }
        if timings {
            for (k, ms) in &self.timings {
                let _ = writeln!(out, "time {k}: {ms:.1} ms");
            }
        }
        out
    }

    pub fn render(&self, format: Format, timings: bool) -> String {
        match format {
            Format::Text => self.to_text(timings),
            Format::Json => self.to_json(timings),
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(o) => format!(
            "{{{}}}",
            o.iter()
                .map(|(k, v)| format!("{k}: {}", scalar(v)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if is_flat(v) {
        let _ = writeln!(out, "{pad}{key}: {}", scalar(v));
        return;
    }
    let _ = writeln!(out, "{pad}{key}:");
    match v {
        Value::Array(rows) => {
            for r in rows {
                let _ = writeln!(out, "{pad}  {}", scalar(r));
            }
        }
        Value::Object(o) => {
            for (k, x) in o {
                write_value(out, k, x, depth + 1);
            }
        }
        _ => unreachable!("flat values handled above"),
    }
}

/// A rendered command result with its exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub exit: Exit,
    /// Replaces the text rendering when set.
    pub text: Option<String>,
}

impl Outcome {
    pub fn new(report: Report, exit: Exit) -> Outcome {
        Outcome {
            report,
            exit,
            text: None,
        }
    }

    pub fn render(&self, format: Format, timings: bool) -> String {
        match (&self.text, format) {
            (Some(t), Format::Text) => t.clone(),
            _ => self.report.render(format, timings),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_layouts() {
        let mut r = Report::new("svp");
        r.input_sha256 = Some("ab".into());
        r.put("lambda_squared", rational(&Rational::new(7.into(), 6.into())));
        r.put(
            "minima",
            vectors(&[CoordVector::from(vec![1, 0]), CoordVector::from(vec![0, 1])]),
        );
        r.put("pairs", 2);
        assert_eq!(
            r.to_text(false),
            "command: svp\ninput_sha256: ab\nlambda_squared: 7/6\nminima:\n  [1, 0]\n  [0, 1]\npairs: 2\n"
        );
        let v: Value = serde_json::from_str(&r.to_json(false)).unwrap();
        assert_eq!(v["results"]["lambda_squared"], "7/6");
        assert_eq!(v["input_sha256"], "ab");
        assert!(v.get("timings").is_none());
        assert!(serde_json::from_str::<Value>(&r.to_json(true))
            .unwrap()
            .get("timings")
            .is_some());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            Exit::for_error(&Error::Parse {
                line: 1,
                message: String::new()
            }),
            Exit::Usage
        );
        assert_eq!(
            Exit::for_error(&Error::NotPositiveDefinite {
                index: 0,
                pivot: Rational::from_integer(0.into())
            }),
            Exit::Invalid
        );
        assert_eq!(
            Exit::for_error(&Error::IterationCap {
                cap: 1,
                trace: String::new()
            }),
            Exit::Cap
        );
    }
}
