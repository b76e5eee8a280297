use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

/// One check run: what was asked, which claim it exercises, and the outcome.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub check: &'static str,
    pub config: Value,
    pub passed: bool,
    pub summary: Vec<String>,
    pub details: Value,
}

impl Report {
    pub fn new(command: &str, check: &'static str, config: Value) -> Self {
        Report { command: command.into(), check, config, passed: true, summary: Vec::new(), details: Value::Null }
    }

    /// Records a line of the summary and folds its verdict into the result.
    pub fn line(&mut self, ok: bool, text: impl Into<String>) {
        let text = text.into();
        self.passed &= ok;
        self.summary.push(format!("[{}] {text}", if ok { "pass" } else { "FAIL" }));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    pub fn detail(&mut self, key: &str, v: impl Serialize) {
        if !self.details.is_object() {
            self.details = Value::Object(Default::default());
        }
        let v = serde_json::to_value(v).expect("report details serialize");
        self.details.as_object_mut().unwrap().insert(key.into(), v);
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# qmv {}\n", self.command);
        let _ = writeln!(s, "- check: `{}`", self.check);
        let _ = writeln!(s, "- result: **{}**", if self.passed { "pass" } else { "FAIL" });
        if let Value::Object(cfg) = &self.config {
            for (k, v) in cfg {
                let _ = writeln!(s, "- {k}: `{v}`");
            }
        }
        s.push_str("\n## Summary\n\n");
        for l in &self.summary {
            let _ = writeln!(s, "- {l}");
        }
        s
    }

    pub fn write_files(&self, dir: &Path, stem: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{stem}.json")), self.json())?;
        std::fs::write(dir.join(format!("{stem}.md")), self.markdown())
    }
}
