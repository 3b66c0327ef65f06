//! Severity-tagged validation reports.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// One finding. `code` is a stable kebab-case tag that tests and scripts can
/// match on; `subject` names the offending item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub diagnostics: Vec<Diagnostic>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        severity: Severity,
        code: &str,
        subject: impl Into<String>,
        message: impl Into<String>,
    ) {
        self.diagnostics.push(Diagnostic {
            severity,
            code: code.to_owned(),
            subject: subject.into(),
            message: message.into(),
        });
    }

    pub fn error(&mut self, code: &str, subject: impl Into<String>, message: impl Into<String>) {
        self.push(Severity::Error, code, subject, message);
    }

    pub fn warning(&mut self, code: &str, subject: impl Into<String>, message: impl Into<String>) {
        self.push(Severity::Warning, code, subject, message);
    }

    pub fn info(&mut self, code: &str, subject: impl Into<String>, message: impl Into<String>) {
        self.push(Severity::Info, code, subject, message);
    }

    pub fn extend(&mut self, other: Report) {
        self.diagnostics.extend(other.diagnostics);
    }

    pub fn with_severity(&self, severity: Severity) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(move |d| d.severity == severity)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.with_severity(Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.with_severity(Severity::Warning)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn count(&self, code: &str) -> usize {
        self.diagnostics.iter().filter(|d| d.code == code).count()
    }
}

/// Errors first, then warnings, then notes; one line each, followed by a
/// summary line.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for severity in [Severity::Error, Severity::Warning, Severity::Info] {
            for d in self.with_severity(severity) {
                writeln!(f, "{}[{}] {}: {}", d.severity, d.code, d.subject, d.message)?;
            }
        }
        write!(
            f,
            "summary: {} error(s), {} warning(s), {} note(s)",
            self.errors().count(),
            self.warnings().count(),
            self.with_severity(Severity::Info).count()
        )
    }
}
