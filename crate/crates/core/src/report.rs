//! Residual reports shared by the identity suites and the CLI.

use serde::Serialize;

/// One tolerance-gated residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
    /// Informational checks are reported but never gate `passed()`.
    pub informational: bool,
}

/// Named collection of checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), checks: Vec::new() }
    }

    /// Records a gating check. NaN residuals fail.
    pub fn push(&mut self, name: impl Into<String>, residual: f64, tol: f64) -> &mut Self {
        let passed = residual.is_finite() && residual < tol;
        self.checks.push(Check { name: name.into(), residual, tol, passed, informational: false });
        self
    }

    /// Records a boolean gating check (residual 0 or 1).
    pub fn push_bool(&mut self, name: impl Into<String>, ok: bool) -> &mut Self {
        self.push(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    /// Records a diagnostic that never gates the report.
    pub fn info(&mut self, name: impl Into<String>, residual: f64, tol: f64) -> &mut Self {
        let passed = residual.is_finite() && residual < tol;
        self.checks.push(Check { name: name.into(), residual, tol, passed, informational: true });
        self
    }

    pub fn extend(&mut self, other: Report) -> &mut Self {
        let prefix = other.title;
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| !c.informational).all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| !c.informational)
            .map(|c| if c.residual.is_nan() { f64::INFINITY } else { c.residual })
            .fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.informational && !c.passed)
    }
}

/// `|a - b| / max(1, |a|)`: absolute near zero, relative for large values.
pub fn mixed_residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn informational_checks_do_not_gate() {
        let mut r = Report::new("t");
        r.push("ok", 1e-14, 1e-12).info("diag", 0.5, 1e-12);
        assert!(r.passed());
        r.push("nan", f64::NAN, 1.0);
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }
}
