//! Tolerance checks and the manifest they are written to.

use std::fmt::{self, Write as _};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Recorded for the reader; never fails a run.
    Flag,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Flag => "FLAG",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub measured: String,
    pub tolerance: String,
    pub verdict: Verdict,
}

/// Shortest round-trip text of a float, so manifests are reproducible.
pub fn num(v: f64) -> String {
    let rounded = format!("{:.6e}", v).parse::<f64>().unwrap_or(v);
    if rounded == 0.0 {
        "0".into()
    } else if (1e-4..1e6).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        expected: impl Into<String>,
        measured: impl Into<String>,
        tolerance: impl Into<String>,
        ok: bool,
    ) -> Self {
        Self {
            name: name.into(),
            expected: expected.into(),
            measured: measured.into(),
            tolerance: tolerance.into(),
            verdict: verdict(ok),
        }
    }

    /// |measured − expected| ≤ tol
    pub fn within(name: impl Into<String>, expected: f64, measured: f64, tol: f64) -> Self {
        let ok = (measured - expected).abs() <= tol;
        Self::new(name, num(expected), num(measured), format!("+-{}", num(tol)), ok)
    }

    /// |measured − expected| ≤ rel·|expected|
    pub fn relative(name: impl Into<String>, expected: f64, measured: f64, rel: f64) -> Self {
        let ok = (measured - expected).abs() <= rel * expected.abs();
        Self::new(
            name,
            num(expected),
            num(measured),
            format!("rel {}", num(rel)),
            ok,
        )
    }

    pub fn at_most(name: impl Into<String>, bound: f64, measured: f64) -> Self {
        Self::new(
            name,
            format!("<= {}", num(bound)),
            num(measured),
            "bound",
            measured <= bound,
        )
    }

    pub fn below(name: impl Into<String>, bound: f64, measured: f64) -> Self {
        Self::new(
            name,
            format!("< {}", num(bound)),
            num(measured),
            "bound",
            measured < bound,
        )
    }

    pub fn at_least(name: impl Into<String>, bound: f64, measured: f64) -> Self {
        Self::new(
            name,
            format!(">= {}", num(bound)),
            num(measured),
            "bound",
            measured >= bound,
        )
    }

    pub fn above(name: impl Into<String>, bound: f64, measured: f64) -> Self {
        Self::new(
            name,
            format!("> {}", num(bound)),
            num(measured),
            "bound",
            measured > bound,
        )
    }

    /// A known inconsistency, reported without affecting the exit status.
    pub fn flag(
        name: impl Into<String>,
        expected: impl Into<String>,
        measured: impl Into<String>,
        note: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            expected: expected.into(),
            measured: measured.into(),
            tolerance: note.into(),
            verdict: Verdict::Flag,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check: {}, {}, {}, {}, {}",
            self.name,
            self.expected,
            self.measured,
            self.tolerance,
            self.verdict.label()
        )
    }
}

/// Plain-text record of a run: `key: value` notes followed by checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    pub notes: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Manifest {
    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Manifest) {
        self.notes.extend(other.notes);
        self.checks.extend(other.checks);
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.notes {
            let _ = writeln!(out, "{k}: {v}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "{c}");
        }
        let _ = writeln!(
            out,
            "summary: {} checks, {} failed",
            self.checks.len(),
            self.failures()
        );
        out
    }
}
