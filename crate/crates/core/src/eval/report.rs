//! Evaluation reports and their three output formats: a human-readable grid,
//! per-rollout CSV, and full JSON. The emitted artifacts are deterministic;
//! wall-clock time stays on the struct for callers but is never serialized.

use super::EvalError;
use crate::control::ControllerStatus;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatementSummary {
    pub index: usize,
    pub kind: String,
    pub status: String,
    pub elapsed_s: f64,
    pub final_status: Option<ControllerStatus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RolloutSummary {
    pub world_seed: u64,
    pub success: bool,
    pub faulted: bool,
    pub aborted: Option<String>,
    pub statements: Vec<StatementSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: String,
    pub method: String,
    pub n_evals: u32,
    pub successes: u32,
    pub failures: u32,
    pub faults: u32,
    pub seed: u64,
    /// Canonical text of the program that ran, when one was obtained.
    pub program: Option<String>,
    pub notes: Vec<String>,
    pub rollouts: Vec<RolloutSummary>,
    #[serde(skip)]
    pub wall_clock_s: f64,
}

impl Report {
    pub fn success_rate_percent(&self) -> u32 {
        if self.n_evals == 0 {
            return 0;
        }
        (self.successes * 100) / self.n_evals
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

impl ReportFormat {
    pub fn parse(name: &str) -> Option<ReportFormat> {
        match name {
            "table" => Some(ReportFormat::Table),
            "csv" => Some(ReportFormat::Csv),
            "json" => Some(ReportFormat::Json),
            _ => None,
        }
    }
}

pub fn render_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => render_table(std::slice::from_ref(report)),
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("report serializes");
            text.push('\n');
            text
        }
    }
}

/// Tables-style grid, one row per report.
pub fn render_table(reports: &[Report]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<28} {:<24} {:>6} {:>9} {:>7} {:>6}",
        "task", "method", "evals", "successes", "faults", "rate"
    )
    .unwrap();
    for r in reports {
        writeln!(
            out,
            "{:<28} {:<24} {:>6} {:>9} {:>7} {:>5}%",
            r.task,
            r.method,
            r.n_evals,
            r.successes,
            r.faults,
            r.success_rate_percent()
        )
        .unwrap();
    }
    out
}

const CSV_HEADER: &str =
    "task,method,n_evals,successes,failures,faults,seed,world_seed,success,faulted";

/// One row per rollout; report-level numeric fields repeat on every row so
/// the file alone reconstructs them.
fn render_csv(report: &Report) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rollouts {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            report.task,
            report.method,
            report.n_evals,
            report.successes,
            report.failures,
            report.faults,
            report.seed,
            r.world_seed,
            r.success,
            r.faulted
        )
        .unwrap();
    }
    // a rollout-free report still carries its summary
    if report.rollouts.is_empty() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},,,",
            report.task,
            report.method,
            report.n_evals,
            report.successes,
            report.failures,
            report.faults,
            report.seed
        )
        .unwrap();
    }
    out
}

/// Rebuild a report from its CSV rendering. Statement traces and notes are
/// JSON-only; every numeric field survives the round trip.
pub fn report_from_csv(text: &str) -> Result<Report, EvalError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| EvalError::InvalidProgram("empty csv".into()))?;
    if header != CSV_HEADER {
        return Err(EvalError::InvalidProgram(format!(
            "unexpected csv header `{header}`"
        )));
    }
    let mut report: Option<Report> = None;
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(EvalError::InvalidProgram(format!(
                "expected 10 csv fields, got {}",
                fields.len()
            )));
        }
        let parse_u32 = |s: &str| {
            s.parse::<u32>()
                .map_err(|e| EvalError::InvalidProgram(format!("bad number `{s}`: {e}")))
        };
        let base = report.get_or_insert_with(|| Report {
            task: fields[0].to_string(),
            method: fields[1].to_string(),
            n_evals: 0,
            successes: 0,
            failures: 0,
            faults: 0,
            seed: 0,
            program: None,
            notes: Vec::new(),
            rollouts: Vec::new(),
            wall_clock_s: 0.0,
        });
        base.n_evals = parse_u32(fields[2])?;
        base.successes = parse_u32(fields[3])?;
        base.failures = parse_u32(fields[4])?;
        base.faults = parse_u32(fields[5])?;
        base.seed = fields[6]
            .parse()
            .map_err(|e| EvalError::InvalidProgram(format!("bad seed: {e}")))?;
        if !fields[7].is_empty() {
            base.rollouts.push(RolloutSummary {
                world_seed: fields[7]
                    .parse()
                    .map_err(|e| EvalError::InvalidProgram(format!("bad world seed: {e}")))?,
                success: fields[8] == "true",
                faulted: fields[9] == "true",
                aborted: None,
                statements: Vec::new(),
            });
        }
    }
    report.ok_or_else(|| EvalError::InvalidProgram("csv held no data rows".into()))
}

pub fn emit_report(report: &Report, format: ReportFormat, path: &Path) -> Result<(), EvalError> {
    let text = render_report(report, format);
    std::fs::write(path, text).map_err(|e| EvalError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        Report {
            task: "rgmc-unroute".into(),
            method: "ours-few".into(),
            n_evals: 2,
            successes: 1,
            failures: 0,
            faults: 1,
            seed: 7,
            program: Some("grasp_cable();\n".into()),
            notes: vec![],
            rollouts: vec![
                RolloutSummary {
                    world_seed: 7,
                    success: true,
                    faulted: false,
                    aborted: None,
                    statements: vec![],
                },
                RolloutSummary {
                    world_seed: 8,
                    success: false,
                    faulted: true,
                    aborted: Some("statement 1 faulted".into()),
                    statements: vec![],
                },
            ],
            wall_clock_s: 1.25,
        }
    }

    #[test]
    fn table_shows_percentage() {
        let mut r = sample_report();
        r.successes = 2;
        r.faults = 0;
        let table = render_report(&r, ReportFormat::Table);
        assert!(table.contains("100%"), "{table}");
    }

    #[test]
    fn empty_report_renders_header_only_csv() {
        let mut r = sample_report();
        r.rollouts.clear();
        let csv = render_report(&r, ReportFormat::Csv);
        assert!(csv.starts_with(CSV_HEADER));
    }

    #[test]
    fn json_csv_json_round_trip_preserves_numeric_fields() {
        let report = sample_report();
        let via_csv = report_from_csv(&render_report(&report, ReportFormat::Csv)).unwrap();
        assert_eq!(via_csv.n_evals, report.n_evals);
        assert_eq!(via_csv.successes, report.successes);
        assert_eq!(via_csv.failures, report.failures);
        assert_eq!(via_csv.faults, report.faults);
        assert_eq!(via_csv.seed, report.seed);
        let seeds: Vec<u64> = via_csv.rollouts.iter().map(|r| r.world_seed).collect();
        assert_eq!(seeds, vec![7, 8]);
        let flags: Vec<(bool, bool)> = via_csv
            .rollouts
            .iter()
            .map(|r| (r.success, r.faulted))
            .collect();
        assert_eq!(flags, vec![(true, false), (false, true)]);
    }

    #[test]
    fn wall_clock_never_serializes() {
        let report = sample_report();
        let json = render_report(&report, ReportFormat::Json);
        assert!(!json.contains("wall_clock"));
    }
}
