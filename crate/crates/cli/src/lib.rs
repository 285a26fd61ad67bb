//! Scenario runner behind the `hovey` command: loads an algebra, a universe
//! and named classes, runs an ordered list of checks, writes a JSON report
//! with witnesses and prints a one-line-per-check summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use hovey_core::{Algebra, AlgebraSpec, Report, Verdict, Witness};
use serde::Deserialize;
use thiserror::Error;

pub mod input;
pub mod run;
pub mod scenario;

pub use run::{CheckRecord, RunReport, Runner, SCHEMA};
pub use scenario::{Check, PairRef, Scenario, ScenarioLimits, TripleRef};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] hovey_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

pub fn exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail { .. } => EXIT_FAIL,
        Verdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    }
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    input::read_json(path)
}

/// Runs a scenario whose relative paths resolve against `base`.
pub fn run_scenario(scenario: Scenario, base: &Path) -> Result<RunReport, CliError> {
    Runner::new(scenario, base.to_path_buf())?.run(timestamp())
}

/// Loads and runs a scenario file. The report is written to `out`, else to
/// the scenario's `output` path (relative to the file), else nowhere.
pub fn run_scenario_file(path: &Path, out: Option<&Path>) -> Result<RunReport, CliError> {
    let scenario = load_scenario(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let target = out.map(Path::to_path_buf).or_else(|| scenario.output.as_ref().map(|o| base.join(o)));
    let report = run_scenario(scenario, &base)?;
    if let Some(t) = target {
        write_report(&report, &t)?;
    }
    Ok(report)
}

pub fn write_report(report: &RunReport, path: &Path) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("serialisable report") + "\n";
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn verdict_tag(v: &Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail { .. } => "FAIL",
        Verdict::Inconclusive { .. } => "INCONCLUSIVE",
    }
}

/// One line per check and a closing verdict line.
pub fn summary(report: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "scenario {} (universe {} objects, {})",
        report.scenario.name, report.universe_size, report.universe_fingerprint
    );
    for (k, rec) in report.checks.iter().enumerate() {
        let _ =
            write!(s, "[{}] {:>2} {}: {}", verdict_tag(&rec.report.verdict), k + 1, rec.check.name(), rec.report.name);
        match &rec.report.verdict {
            Verdict::Pass => {}
            Verdict::Fail { reason } | Verdict::Inconclusive { reason } => {
                let _ = write!(s, " ({reason})");
            }
        }
        s.push('\n');
    }
    let _ = writeln!(s, "verdict: {}", verdict_tag(&report.verdict));
    s
}

#[derive(Deserialize)]
struct StoredCheck {
    algebras: Vec<AlgebraSpec>,
    report: Report,
}

#[derive(Deserialize)]
struct StoredReport {
    schema: String,
    checks: Vec<StoredCheck>,
}

/// Outcome of re-checking the witnesses of a stored report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessSummary {
    pub verified: usize,
    /// Label and reason of every witness that did not re-check.
    pub rejected: Vec<(String, String)>,
}

impl WitnessSummary {
    pub fn all_verified(&self) -> bool {
        self.rejected.is_empty()
    }
}

/// Re-checks every witness of a report against the algebras recorded for
/// its check. A witness passes if it re-checks over one of them.
pub fn verify_witnesses(path: &Path) -> Result<WitnessSummary, CliError> {
    let stored: StoredReport = input::read_json(path)?;
    if stored.schema != SCHEMA {
        return Err(CliError::Input(format!("unsupported report schema '{}'", stored.schema)));
    }
    let mut out = WitnessSummary::default();
    for check in &stored.checks {
        let algebras: Vec<Algebra> = check.algebras.iter().map(Algebra::from_spec).collect::<Result<_, _>>()?;
        for w in check.report.all_witnesses() {
            match verify_one(w, &algebras) {
                Ok(()) => out.verified += 1,
                Err(why) => out.rejected.push((w.label().to_string(), why)),
            }
        }
    }
    Ok(out)
}

fn verify_one(w: &Witness, algebras: &[Algebra]) -> Result<(), String> {
    let mut last = String::from("no algebra recorded for the check");
    for alg in algebras {
        match w.verify(alg) {
            Ok(()) => return Ok(()),
            Err(e) => last = e.to_string(),
        }
    }
    Err(last)
}
