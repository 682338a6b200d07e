//! Tabular report plus a JSON summary, written as `<name>.csv` and
//! `<name>.summary`.

use std::io::Write;
use std::path::{Path, PathBuf};

use intconj::{ExtReal, Interval};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Value,
    /// Set when a computed quantity violates an invariant that must hold.
    pub breach: Option<String>,
}

/// 17 significant digits, `inf` / `-inf` for infinities.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x > 0.0 {
        "inf".into()
    } else if x < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

pub fn ext(x: ExtReal<f64>) -> String {
    match x {
        ExtReal::Finite(v) => num(v),
        ExtReal::PosInf => "inf".into(),
        ExtReal::NegInf => "-inf".into(),
    }
}

pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(num(x))
    }
}

pub fn jext(x: ExtReal<f64>) -> Value {
    match x {
        ExtReal::Finite(v) => json!(v),
        e => json!(ext(e)),
    }
}

pub fn jiv(iv: Interval<f64>) -> Value {
    if iv.is_empty() {
        Value::Null
    } else {
        json!([jnum(iv.lo()), jnum(iv.hi())])
    }
}

impl Report {
    pub fn new(header: &[&str]) -> Self {
        Report {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            summary: json!({}),
            breach: None,
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    pub fn summary_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("serializable");
        s.push('\n');
        s
    }

    /// Writes both files into `dir`, returning their paths.
    pub fn write(&self, dir: &Path, name: &str) -> Result<(PathBuf, PathBuf), CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let csv = dir.join(format!("{name}.csv"));
        let summary = dir.join(format!("{name}.summary"));
        write_file(&csv, &self.csv())?;
        write_file(&summary, &self.summary_text())?;
        Ok((csv, summary))
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Looks up a dotted path (`a.b.0.c`) in a JSON value.
pub fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |cur, key| match cur {
        Value::Object(m) => m.get(key),
        Value::Array(a) => key.parse::<usize>().ok().and_then(|i| a.get(i)),
        _ => None,
    })
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" | "+inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            _ => None,
        },
        _ => None,
    }
}

/// Compares `got` against `want`: numbers within `tol`, everything else
/// structurally.
pub fn matches(got: &Value, want: &Value, tol: f64) -> bool {
    match (got, want) {
        (Value::Array(a), Value::Array(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| matches(x, y, tol)),
        (Value::Object(a), Value::Object(b)) => {
            b.iter().all(|(k, y)| a.get(k).map_or(false, |x| matches(x, y, tol)))
        }
        _ => match (as_f64(got), as_f64(want)) {
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() => (x - y).abs() <= tol,
            (Some(x), Some(y)) => x == y,
            _ => got == want,
        },
    }
}

/// Checks one expectation entry; returns a message on failure.
pub fn check_entry(summary: &Value, key: &str, want: &Value, tol: f64) -> Option<String> {
    let (path, op) = if let Some(p) = key.strip_suffix("<=") {
        (p, "<=")
    } else if let Some(p) = key.strip_suffix(">=") {
        (p, ">=")
    } else {
        (key, "==")
    };
    let Some(got) = lookup(summary, path) else {
        return Some(format!("{path}: missing from summary"));
    };
    let ok = match op {
        "==" => matches(got, want, tol),
        _ => match (as_f64(got), as_f64(want)) {
            (Some(x), Some(y)) if op == "<=" => x <= y + tol,
            (Some(x), Some(y)) => x >= y - tol,
            _ => false,
        },
    };
    (!ok).then(|| format!("{path}: got {got}, expected {op} {want}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(-0.1), "-1.0000000000000001e-1");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(ext(ExtReal::NegInf), "-inf");
        let x = 0.1 + 0.2;
        assert_eq!(num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn expectation_entries() {
        let s = json!({"a": {"b": [1.0, "inf"]}, "ok": true, "gap": 5e-4});
        assert!(check_entry(&s, "a.b.0", &json!(1.0), 1e-9).is_none());
        assert!(check_entry(&s, "a.b.1", &json!("inf"), 1e-9).is_none());
        assert!(check_entry(&s, "ok", &json!(true), 0.0).is_none());
        assert!(check_entry(&s, "gap<=", &json!(1e-3), 0.0).is_none());
        assert!(check_entry(&s, "gap>=", &json!(1e-3), 0.0).is_some());
        assert!(check_entry(&s, "missing", &json!(1), 0.0).is_some());
    }
}
