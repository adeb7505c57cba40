//! Benchmark evaluation: the best-of-n generation protocol, seeded rollouts,
//! action-space comparisons, the robustness study, and the hint ablation.

mod ablation;
mod reference;
mod report;
mod rewrite;
mod runner;

pub use ablation::{default_hint_ladder, render_ablation, run_hint_ablation, AblationCell};
pub use reference::{
    load_program, reference_program, reference_program_text, scripted_program,
    scripted_program_text,
};
pub use report::{
    emit_report, render_report, render_table, report_from_csv, Report, ReportFormat,
    RolloutSummary, StatementSummary,
};
pub use rewrite::{fixed_compliance_rewrite, ptp_rewrite};
pub use runner::{obtain_program, run_evaluation, run_robustness, run_rollouts, world_seed, EvalRequest};

use crate::llm::{LlmError, Shots};
use crate::sim::SimError;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("method incompatible with task: {0}")]
    IncompatibleMethod(String),
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Where the program under evaluation comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ProgramSource {
    /// The task's shipped reference policy.
    Reference,
    /// A program file on disk.
    Canned(PathBuf),
    /// Best-of-n generation through the harness.
    Ours { shots: Shots },
}

/// An evaluation method: how the program is obtained and which action space
/// it runs in.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    /// The frozen expert baseline (insertion tasks only).
    Scripted,
    /// The task's shipped reference policy.
    Reference,
    /// Point-to-point rewrite of a base program.
    PtpCodegen { base: ProgramSource },
    /// Fixed-compliance rewrite of a base program.
    FixedCompliance { base: ProgramSource },
    /// The compliant action space with generated code.
    Ours { shots: Shots },
    /// A compliant program loaded from disk.
    Canned { path: PathBuf },
}

impl Method {
    /// Parse a command-line method name:
    /// `scripted`, `reference`, `ptp`, `fixed-compliance`, `ours-zero`,
    /// `ours-few`, `canned:<path>`; `ptp` and `fixed-compliance` accept an
    /// optional `:<base>` where base is `reference`, `canned:<path>`,
    /// `ours-zero` or `ours-few` (defaults to the task's reference program).
    pub fn parse(text: &str) -> Option<Method> {
        if let Some(path) = text.strip_prefix("canned:") {
            return Some(Method::Canned {
                path: PathBuf::from(path),
            });
        }
        if let Some(rest) = text.strip_prefix("ptp") {
            return Some(Method::PtpCodegen {
                base: parse_base(rest)?,
            });
        }
        if let Some(rest) = text.strip_prefix("fixed-compliance") {
            return Some(Method::FixedCompliance {
                base: parse_base(rest)?,
            });
        }
        match text {
            "scripted" => Some(Method::Scripted),
            "reference" => Some(Method::Reference),
            "ours-zero" => Some(Method::Ours { shots: Shots::Zero }),
            "ours-few" => Some(Method::Ours { shots: Shots::Few }),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Method::Scripted => "scripted".into(),
            Method::Reference => "reference".into(),
            Method::PtpCodegen { base } => format!("ptp{}", base_suffix(base)),
            Method::FixedCompliance { base } => {
                format!("fixed-compliance{}", base_suffix(base))
            }
            Method::Ours { shots: Shots::Zero } => "ours-zero".into(),
            Method::Ours { shots: Shots::Few } => "ours-few".into(),
            Method::Canned { path } => format!("canned:{}", path.display()),
        }
    }
}

fn parse_base(rest: &str) -> Option<ProgramSource> {
    match rest {
        "" => Some(ProgramSource::Reference),
        ":reference" => Some(ProgramSource::Reference),
        ":ours-zero" => Some(ProgramSource::Ours { shots: Shots::Zero }),
        ":ours-few" => Some(ProgramSource::Ours { shots: Shots::Few }),
        _ => rest.strip_prefix(":canned:").map(|path| ProgramSource::Canned(PathBuf::from(path))),
    }
}

fn base_suffix(base: &ProgramSource) -> String {
    match base {
        ProgramSource::Reference => String::new(),
        ProgramSource::Canned(path) => format!(":canned:{}", path.display()),
        ProgramSource::Ours { shots: Shots::Zero } => ":ours-zero".into(),
        ProgramSource::Ours { shots: Shots::Few } => ":ours-few".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for name in [
            "scripted",
            "reference",
            "ptp",
            "fixed-compliance",
            "ours-zero",
            "ours-few",
            "canned:policies/x.mvs",
            "ptp:ours-few",
            "fixed-compliance:canned:x.mvs",
        ] {
            let method = Method::parse(name).unwrap_or_else(|| panic!("{name} must parse"));
            assert_eq!(method.name(), name);
        }
        assert!(Method::parse("nonsense").is_none());
    }
}
