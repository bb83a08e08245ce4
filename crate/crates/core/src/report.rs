//! Machine-readable command reports.

use serde::Serialize;
use serde_json::Value;

/// One check: what was compared, under which key (signature or order).
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Record {
    pub name: String,
    pub key: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Record {
    pub fn new(name: &str, key: impl ToString, expected: impl ToString, actual: impl ToString, pass: bool) -> Self {
        Record { name: name.into(), key: key.to_string(), expected: expected.to_string(), actual: actual.to_string(), pass }
    }

    /// A record whose expected and actual values are compared for equality.
    pub fn compare(name: &str, key: impl ToString, expected: impl ToString, actual: impl ToString) -> Self {
        let (e, a) = (expected.to_string(), actual.to_string());
        let pass = e == a;
        Record { name: name.into(), key: key.to_string(), expected: e, actual: a, pass }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

/// `pass` holds iff every record passes. Everything except `timing` is
/// deterministic for fixed inputs.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub records: Vec<Record>,
    pub pass: bool,
    /// Extra command output (e.g. the full verifier report).
    pub detail: Value,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report { command, records: Vec::new(), pass: true, detail: Value::Null, timing: Timing { elapsed_ms: 0 } }
    }

    pub fn push(&mut self, r: Record) {
        self.pass &= r.pass;
        self.records.push(r);
    }

    /// Process exit code: 0 on pass, 1 on a failed check.
    pub fn exit_code(&self) -> u8 {
        u8::from(!self.pass)
    }

    /// The report without its timing, for byte-for-byte comparison.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("timing");
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.command.join(" "));
        for r in &self.records {
            let mark = if r.pass { "ok  " } else { "FAIL" };
            out += &format!("{mark} {} [{}] expected {} got {}\n", r.name, r.key, r.expected, r.actual);
        }
        out += &format!("{} ({} ms)\n", if self.pass { "PASS" } else { "FAIL" }, self.timing.elapsed_ms);
        out
    }
}
