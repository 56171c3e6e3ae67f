use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

/// Collects JSON-lines report entries in order and writes them at the end.
pub struct Report {
    command: String,
    lines: Vec<Value>,
    checks: usize,
    failed: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report { command: command.into(), lines: Vec::new(), checks: 0, failed: Vec::new() }
    }

    /// A named check; `data` is merged into the line.
    pub fn check(&mut self, name: &str, pass: bool, witness: Option<String>, data: Value) {
        let mut line = Map::new();
        line.insert("check".into(), json!(name));
        line.insert("pass".into(), json!(pass));
        if let Some(w) = witness {
            line.insert("witness".into(), json!(w));
        }
        if let Value::Object(extra) = data {
            line.extend(extra);
        }
        self.checks += 1;
        if !pass {
            self.failed.push(name.to_string());
        }
        self.lines.push(Value::Object(line));
    }

    /// A line that is not a check.
    pub fn info(&mut self, kind: &str, data: Value) {
        let mut line = Map::new();
        line.insert("info".into(), json!(kind));
        if let Value::Object(extra) = data {
            line.extend(extra);
        }
        self.lines.push(Value::Object(line));
    }

    pub fn pass(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn write(&self, exit: i32, error: Option<&str>, to: Option<&Path>) -> io::Result<()> {
        let mut out: Box<dyn Write> = match to {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        };
        for line in &self.lines {
            writeln!(out, "{line}")?;
        }
        let mut summary = json!({
            "summary": {
                "command": self.command,
                "pass": exit == 0,
                "checks": self.checks,
                "failed": self.failed,
                "exit_code": exit,
            }
        });
        if let Some(e) = error {
            summary["summary"]["error"] = json!(e);
        }
        writeln!(out, "{summary}")?;
        out.flush()
    }
}
