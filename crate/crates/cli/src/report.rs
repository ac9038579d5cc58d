use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

/// Significant digits used for every floating-point value.
pub const SIG_DIGITS: usize = 12;

/// One table cell. Integers are kept exact, floats are rounded on output.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    /// Not applicable; empty in CSV, `null` in JSON.
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Rounds to [`SIG_DIGITS`] significant digits.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIG_DIGITS - 1, v).parse().unwrap()
}

/// Shortest text for the rounded value; plain decimal for moderate
/// magnitudes, exponent form otherwise.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(v);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(i) => json!(i),
                Err(_) => match u64::try_from(*v) {
                    Ok(u) => json!(u),
                    Err(_) => json!(v.to_string()),
                },
            },
            Cell::Float(v) => float_json(*v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

/// Rounded float as a JSON number; non-finite values become `null`.
pub fn float_json(v: f64) -> Value {
    serde_json::Number::from_f64(round_sig(v)).map_or(Value::Null, Value::Number)
}

/// A pass/fail comparison against a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(serialize_with = "ser_float")]
    pub expected: f64,
    #[serde(serialize_with = "ser_float")]
    pub actual: f64,
    #[serde(serialize_with = "ser_float")]
    pub tolerance: f64,
    /// `"relative"` or `"absolute"`.
    pub mode: &'static str,
    pub passed: bool,
}

fn ser_float<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    float_json(*v).serialize(s)
}

impl Check {
    pub fn absolute(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        let passed = (actual - expected).abs() <= tolerance;
        Self {
            name: name.into(),
            expected,
            actual,
            tolerance,
            mode: "absolute",
            passed,
        }
    }

    pub fn relative(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        let passed = ((actual - expected) / expected).abs() <= tolerance;
        Self {
            name: name.into(),
            expected,
            actual,
            tolerance,
            mode: "relative",
            passed,
        }
    }

    /// `actual < bound`, reported with expected 0 and the bound as tolerance.
    pub fn below(name: impl Into<String>, actual: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            expected: 0.0,
            actual,
            tolerance: bound,
            mode: "absolute",
            passed: actual.abs() < bound,
        }
    }

    pub fn failure_message(&self) -> String {
        format!(
            "check {} failed: expected {}, actual {}, {} tolerance {}",
            self.name,
            format_float(self.expected),
            format_float(self.actual),
            self.mode,
            format_float(self.tolerance)
        )
    }
}

/// Result table of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            config: Value::Null,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn with_columns(columns: Vec<String>) -> Self {
        Self {
            config: Value::Null,
            columns,
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `# config: {...}`, the header row, data rows, then one `# check:` line per check.
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# config: {}", self.config)?;
        {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::text))?;
            }
            w.flush()?;
        }
        for c in &self.checks {
            writeln!(out, "# check: {}", serde_json::to_string(c)?)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        json!({
            "config": self.config,
            "columns": self.columns,
            "rows": rows,
            "checks": self.checks,
        })
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_twelve_digits() {
        assert_eq!(format_float(6.29), "6.29");
        assert_eq!(format_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(2.5e-11), "2.5e-11");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(format_float(1e20), "1e20");
    }

    #[test]
    fn large_integers_are_exact() {
        let c = Cell::Int(2_432_902_008_176_640_000);
        assert_eq!(c.text(), "2432902008176640000");
        assert_eq!(c.json(), json!(2_432_902_008_176_640_000u64));
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new(&["a", "b"]);
        r.config = json!({"k": 1});
        r.push(vec![Cell::from(1u64), Cell::from(0.5)]);
        r.checks.push(Check::absolute("c", 1.0, 1.0, 0.0));
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"# config: {"k":1}"#);
        assert_eq!(lines[1], "a,b");
        assert_eq!(lines[2], "1,0.5");
        assert!(lines[3].starts_with("# check: "));
    }

    #[test]
    fn relative_check() {
        assert!(Check::relative("x", 2.0, 2.01, 0.01).passed);
        assert!(!Check::relative("x", 2.0, 2.03, 0.01).passed);
        let msg = Check::absolute("x", 1.0, 2.0, 0.5).failure_message();
        assert!(msg.contains("expected 1") && msg.contains("actual 2") && msg.contains("tolerance 0.5"));
    }
}
