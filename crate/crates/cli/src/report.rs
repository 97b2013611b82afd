//! Key-value run reports.
//!
//! Every command prints one report: `key: value` lines in a fixed order,
//! starting with `report_version` and `command`. Reports are
//! byte-reproducible for identical invocations except for the
//! `duration_seconds` line, which is always emitted last.

pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut report = Report { lines: Vec::new() };
        report.push("report_version", "1");
        report.push("command", command);
        report
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn push_opt(&mut self, key: &str, value: Option<impl ToString>) {
        if let Some(v) = value {
            self.push(key, v);
        }
    }

    /// Renders all lines plus the duration and prints them to stdout.
    pub fn print(mut self, duration_seconds: f64) {
        self.push("duration_seconds", format!("{:.6}", duration_seconds));
        let mut out = String::new();
        for (k, v) in &self.lines {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(v);
            out.push('\n');
        }
        print!("{}", out);
    }
}
