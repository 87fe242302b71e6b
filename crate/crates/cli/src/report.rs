use std::io::Write;

use schemars::{schema_for, JsonSchema};
use serde::Serialize;
use serde_json::json;

use fingeo_core::linset::LinearSetSpec;
use fingeo_core::schubert::InvariantCheck;
use fingeo_core::FieldConfig;

use crate::commands::{CodimResult, LinsetResult, OmegaResult, SelftestResult, SpreadResult};
use crate::{Cli, Failure};

/// Everything a command writes.
#[derive(Serialize, JsonSchema)]
pub struct Report<'a, T> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a Cli,
    /// Moduli actually used, as little-endian coefficient lists.
    pub field: Option<FieldConfig>,
    pub result: T,
    pub invariants: Vec<InvariantCheck>,
    /// Every asserted invariant holds.
    pub passed: bool,
}

pub trait Emit {
    /// Writes the report and prints a summary; returns whether it passed.
    fn emit(&self, cli: &Cli) -> Result<bool, Failure>;
}

pub struct Outcome<T> {
    pub name: &'static str,
    pub field: Option<FieldConfig>,
    pub result: T,
    pub invariants: Vec<InvariantCheck>,
    pub summary: String,
}

pub fn check(name: &str, passed: bool, detail: impl Into<String>) -> InvariantCheck {
    InvariantCheck {
        name: name.into(),
        passed,
        asserted: true,
        detail: detail.into(),
    }
}

pub fn finding(name: &str, passed: bool, detail: impl Into<String>) -> InvariantCheck {
    InvariantCheck {
        asserted: false,
        ..check(name, passed, detail)
    }
}

impl<T: Serialize> Emit for Outcome<T> {
    fn emit(&self, cli: &Cli) -> Result<bool, Failure> {
        let passed = self.invariants.iter().all(|i| i.passed || !i.asserted);
        let report = Report {
            tool: "fingeo",
            version: env!("CARGO_PKG_VERSION"),
            config: cli,
            field: self.field.clone(),
            result: &self.result,
            invariants: self.invariants.clone(),
            passed,
        };
        let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
        text.push('\n');
        match &cli.out {
            Some(path) => write_atomically(path, &text)?,
            None => write_stdout(&text)?,
        }
        let failed = self.invariants.iter().filter(|i| !i.passed).count();
        eprintln!(
            "{}: {}; {}/{} checks passed",
            self.name,
            self.summary,
            self.invariants.len() - failed,
            self.invariants.len()
        );
        for inv in &self.invariants {
            if cli.verbose > 0 || !inv.passed {
                let tag = match (inv.passed, inv.asserted) {
                    (true, _) => "ok     ",
                    (false, true) => "FAILED ",
                    (false, false) => "finding",
                };
                eprintln!("  {tag} {}: {}", inv.name, inv.detail);
            }
        }
        Ok(passed)
    }
}

/// A closed pipe on stdout is not an error.
pub fn write_stdout(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure::Input(format!("cannot write to stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn write_atomically(path: &std::path::Path, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Input(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => std::path::Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn schemas() -> String {
    let all = json!({
        "linear_set_spec": schema_for!(LinearSetSpec),
        "reports": {
            "spread": schema_for!(Report<'static, SpreadResult>),
            "linset": schema_for!(Report<'static, LinsetResult>),
            "codim": schema_for!(Report<'static, CodimResult>),
            "omega": schema_for!(Report<'static, OmegaResult>),
            "selftest": schema_for!(Report<'static, SelftestResult>),
        }
    });
    let mut text = serde_json::to_string_pretty(&all).expect("schemas serialize");
    text.push('\n');
    text
}
