//! Structured results for property checks.
//!
//! Every checker produces a [`Report`]: a subject, the degree window the
//! claims are quantified over, and a list of named check lines. A line
//! is `Pass`/`Fail` for verified properties, `Info` for findings that
//! are not axioms (e.g. a non-commutativity witness), and `Skipped`
//! when a check cannot run on the given model. Reports render as
//! aligned text or JSON; both forms are deterministic.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Info => "INFO",
            CheckStatus::Skipped => "SKIP",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub subject: String,
    /// Maximal total degree the checks were quantified over, if bounded.
    pub window: Option<i64>,
    pub checks: Vec<CheckLine>,
}

impl Report {
    pub fn new(subject: impl Into<String>, window: Option<i64>) -> Report {
        Report {
            subject: subject.into(),
            window,
            checks: Vec::new(),
        }
    }

    pub fn line(
        &mut self,
        name: impl Into<String>,
        status: CheckStatus,
        detail: impl Into<String>,
    ) {
        self.checks.push(CheckLine {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.line(name, CheckStatus::Pass, detail);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.line(name, CheckStatus::Fail, detail);
    }

    pub fn info(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.line(name, CheckStatus::Info, detail);
    }

    pub fn skip(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.line(name, CheckStatus::Skipped, detail);
    }

    /// Record a boolean outcome in one step.
    pub fn verdict(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.line(
            name,
            if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail,
        );
    }

    /// True when no line failed (informational and skipped lines do not
    /// count against a report).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn find(&self, name: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        match self.window {
            Some(w) => out.push_str(&format!("== {} (window <= {w}) ==\n", self.subject)),
            None => out.push_str(&format!("== {} ==\n", self.subject)),
        }
        for c in &self.checks {
            out.push_str(&format!("{} {}", c.status, c.name));
            if !c.detail.is_empty() {
                out.push_str(&format!(" -- {}", c.detail));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "subject": self.subject,
            "window": self.window,
            "passed": self.passed(),
            "checks": self.checks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_and_verdicts() {
        let mut r = Report::new("demo", Some(24));
        r.pass("unit", "verified 4 elements");
        r.info("witness", "noncommutative; witness: (x, y)");
        r.skip("module_axioms", "no loop product available");
        assert!(r.passed());
        r.fail("associative", "(x, y, z) mismatch");
        assert!(!r.passed());
        let text = r.render_text();
        assert!(text.starts_with("== demo (window <= 24) ==\n"));
        assert!(text.contains("PASS unit -- verified 4 elements"));
        assert!(text.contains("INFO witness"));
        assert!(text.contains("SKIP module_axioms"));
        assert!(text.contains("FAIL associative"));
        assert!(text.ends_with("overall: FAIL\n"));
    }

    #[test]
    fn json_shape_is_stable() {
        let mut r = Report::new("demo", None);
        r.verdict("check", true, "ok");
        let v = r.to_json();
        assert_eq!(v["subject"], "demo");
        assert_eq!(v["window"], serde_json::Value::Null);
        assert_eq!(v["passed"], true);
        assert_eq!(v["checks"][0]["status"], "pass");
        // identical reports serialize identically
        let mut r2 = Report::new("demo", None);
        r2.verdict("check", true, "ok");
        assert_eq!(
            serde_json::to_string(&r.to_json()).unwrap(),
            serde_json::to_string(&r2.to_json()).unwrap()
        );
    }
}
