use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    /// Largest residual seen, where one applies.
    pub residual: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub experiment: String,
    pub input_echo: Vec<(String, String)>,
    pub assertions: Vec<Assertion>,
    pub summaries: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
}

impl RunReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            ..Self::default()
        }
    }

    pub fn echo(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.input_echo.push((key.into(), value.to_string()));
    }

    pub fn summary(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.summaries.push((key.into(), value.to_string()));
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            passed,
            residual: None,
            detail: detail.into(),
        });
    }

    /// Passes when `residual <= tolerance`.
    pub fn check_residual(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.assertions.push(Assertion {
            name: name.into(),
            passed: residual <= tolerance,
            residual: Some(residual + 0.0),
            detail: format!("tolerance {tolerance:e}"),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> usize {
        self.assertions.iter().filter(|a| !a.passed).count()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.experiment)?;
        for (k, v) in &self.input_echo {
            writeln!(f, "  {k}: {v}")?;
        }
        for (k, v) in &self.summaries {
            writeln!(f, "  {k}: {v}")?;
        }
        for a in &self.assertions {
            let status = if a.passed { "PASS" } else { "FAIL" };
            match a.residual {
                Some(r) => writeln!(
                    f,
                    "  [{status}] {} (residual {r:.3e}, {})",
                    a.name, a.detail
                )?,
                None if a.detail.is_empty() => writeln!(f, "  [{status}] {}", a.name)?,
                None => writeln!(f, "  [{status}] {} ({})", a.name, a.detail)?,
            }
        }
        for p in &self.outputs {
            writeln!(f, "  wrote {}", p.display())?;
        }
        write!(
            f,
            "  {} of {} assertions passed",
            self.assertions.len() - self.failures(),
            self.assertions.len()
        )
    }
}
