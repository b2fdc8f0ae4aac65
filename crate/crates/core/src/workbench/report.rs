use std::fmt;

use serde::Serialize;

use crate::exterior::Form;
use crate::scalar::{PolyScalar, ScalarFraction};

/// A computed or expected quantity. Comparison is structural.
#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Poly(PolyScalar),
    Fraction(ScalarFraction),
    Matrix(Vec<Vec<ScalarFraction>>),
    Form(Form),
}

impl Value {
    fn as_fraction(&self) -> Option<ScalarFraction> {
        match self {
            Value::Int(n) => Some(ScalarFraction::from_poly(PolyScalar::from_int(*n))),
            Value::Poly(p) => Some(ScalarFraction::from_poly(p.clone())),
            Value::Fraction(f) => Some(f.clone()),
            _ => None,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Matrix(a), Value::Matrix(b)) => a == b,
            (Value::Form(a), Value::Form(b)) => a == b,
            (Value::Int(a), Value::Int(b)) => a == b,
            _ => match (self.as_fraction(), other.as_fraction()) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Poly(p) => write!(f, "{p}"),
            Value::Fraction(x) => write!(f, "{x}"),
            Value::Form(x) => write!(f, "{x}"),
            Value::Matrix(rows) => {
                f.write_str("[")?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str("[")?;
                    for (j, e) in row.iter().enumerate() {
                        if j > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{e}")?;
                    }
                    f.write_str("]")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}

impl From<u32> for Value {
    fn from(n: u32) -> Self {
        Value::Int(n as i64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<PolyScalar> for Value {
    fn from(p: PolyScalar) -> Self {
        Value::Poly(p)
    }
}

impl From<ScalarFraction> for Value {
    fn from(x: ScalarFraction) -> Self {
        Value::Fraction(x)
    }
}

impl From<Vec<Vec<ScalarFraction>>> for Value {
    fn from(m: Vec<Vec<ScalarFraction>>) -> Self {
        Value::Matrix(m)
    }
}

impl From<Form> for Value {
    fn from(f: Form) -> Self {
        Value::Form(f)
    }
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// A published closed form or table.
    Published,
    /// An independent computation in this crate.
    Oracle,
    /// Immediate from the definitions.
    Definition,
    /// Supplied by a user scenario file.
    User,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: String,
    pub expected: String,
    pub source: Source,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub example_id: String,
    pub description: String,
    pub passed: bool,
    pub quantities: Vec<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// Exit status when a scenario aborts with an error.
pub const EXIT_ERROR: i32 = 254;

impl Report {
    pub fn new(id: &str, description: &str) -> Self {
        Report {
            example_id: id.to_string(),
            description: description.to_string(),
            passed: true,
            quantities: Vec::new(),
            error: None,
            wall_time_ms: None,
        }
    }

    pub fn check(
        &mut self,
        name: impl Into<String>,
        value: impl Into<Value>,
        expected: impl Into<Value>,
        source: Source,
    ) {
        let (value, expected) = (value.into(), expected.into());
        let matched = value == expected;
        self.passed &= matched;
        self.quantities.push(Quantity {
            name: name.into(),
            value: value.to_string(),
            expected: expected.to_string(),
            source,
            matched,
        });
    }

    pub fn fail(&mut self, message: String) {
        self.passed = false;
        self.error = Some(message);
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.quantities.iter().position(|q| !q.matched)
    }

    /// 0 on success, 254 on error, otherwise `1 +` the first failing step index.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            return EXIT_ERROR;
        }
        match self.first_failure() {
            None if self.passed => 0,
            None => EXIT_ERROR,
            Some(i) => (i as i32 + 1).min(EXIT_ERROR - 1),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {}  ({})\n",
            self.example_id,
            if self.passed { "PASS" } else { "FAIL" },
            self.description
        );
        for q in &self.quantities {
            if q.matched {
                out.push_str(&format!("  ok    {} = {}\n", q.name, q.value));
            } else {
                out.push_str(&format!(
                    "  FAIL  {}: computed {}, expected {}\n",
                    q.name, q.value, q.expected
                ));
            }
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("  error {e}\n"));
        }
        if let Some(ms) = self.wall_time_ms {
            out.push_str(&format!("  time  {ms} ms\n"));
        }
        out
    }
}
