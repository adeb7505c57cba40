//! Hint ablation: rejection-sample failing candidates per hint subset and
//! classify each failure.

use super::EvalError;
use crate::llm::{
    assemble_prompt, bundle_for_task, classify_failure, ChatClient, ErrorCategory, Hint, Shots,
};
use crate::script::{interpret, parse, validate, InterpConfig};
use crate::llm::extract_program;
use crate::sim::{spawn_task, SimConfig, TaskSpec};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Serialize)]
pub struct AblationCell {
    /// Hint names active for this cell.
    pub hints: Vec<String>,
    /// Candidates drawn before enough failures were collected.
    pub sampled: u32,
    /// Failures per category.
    pub counts: BTreeMap<&'static str, u32>,
}

/// The ladder the ablation sweeps: no hints, then cumulatively adding the
/// pattern-search keyword, the extra rules, and the pseudocode request.
pub fn default_hint_ladder() -> Vec<BTreeSet<Hint>> {
    vec![
        BTreeSet::new(),
        BTreeSet::from([Hint::PatternSearch]),
        BTreeSet::from([Hint::PatternSearch, Hint::ExtraRules]),
        BTreeSet::from([Hint::PatternSearch, Hint::ExtraRules, Hint::PseudocodeFirst]),
    ]
}

/// For each hint subset: draw zero-shot candidates, skip the successful ones,
/// classify the first `failures_per_cell` failures.
pub fn run_hint_ablation(
    task: &TaskSpec,
    hint_subsets: &[BTreeSet<Hint>],
    failures_per_cell: u32,
    client: &dyn ChatClient,
    sim: &SimConfig,
    seed: u64,
) -> Result<Vec<AblationCell>, EvalError> {
    let interp_cfg = InterpConfig::from_exec(sim.control);
    let mut cells = Vec::new();
    for subset in hint_subsets {
        let mut bundle = bundle_for_task(task.kind, Shots::Zero);
        bundle.hints = subset.clone();
        let prompt = assemble_prompt(&bundle);
        let mut counts: BTreeMap<&'static str, u32> =
            ErrorCategory::ALL.iter().map(|c| (c.name(), 0)).collect();
        let mut failures = 0u32;
        let mut sampled = 0u32;
        // cap the rejection sampling so a perfect generator cannot hang us
        let max_samples = failures_per_cell.saturating_mul(20).max(1);
        while failures < failures_per_cell && sampled < max_samples {
            let candidate = client.complete(&prompt, sampled)?;
            sampled += 1;
            let category = match parse(&extract_program(&candidate)) {
                Ok(program) if validate(&program, false).is_empty() => {
                    let mut world = spawn_task(task, seed.wrapping_add(sampled as u64));
                    let trace = interpret(&program, &mut world, &interp_cfg);
                    if trace.success {
                        continue; // rejection sampling skips successes
                    }
                    classify_failure(&candidate, Some(&trace), true)
                        .map_err(EvalError::Llm)?
                }
                _ => classify_failure(&candidate, None, true).map_err(EvalError::Llm)?,
            };
            *counts.get_mut(category.name()).expect("all categories present") += 1;
            failures += 1;
        }
        cells.push(AblationCell {
            hints: subset.iter().map(|h| h.name().to_string()).collect(),
            sampled,
            counts,
        });
    }
    Ok(cells)
}

/// Histogram rendering for the terminal.
pub fn render_ablation(cells: &[AblationCell]) -> String {
    let mut out = String::new();
    for cell in cells {
        let label = if cell.hints.is_empty() {
            "(no hints)".to_string()
        } else {
            cell.hints.join(" + ")
        };
        out.push_str(&format!("hints: {label}  [sampled {}]\n", cell.sampled));
        for (name, count) in &cell.counts {
            out.push_str(&format!("  {name:<28} {count:>3}  {}\n", "#".repeat(*count as usize)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::MockClient;
    use crate::sim::TaskKind;

    fn failing_corpus() -> Vec<String> {
        vec![
            // control flow
            "```\nwhile (z_force <= 0.4) { move(); }\n```".to_string(),
            // undefined name
            "```\nmove_compliant(target_pose);\n```".to_string(),
            // valid but no exploration: straight pull up
            "```\ngrasp_cable();\nmove_compliant(pose(1) * pose_rpy([0, 0, 0.02], [0, 0, 0]), until = translation_error <= 0.001);\n```"
                .to_string(),
            // valid with search, wrong force sign: never terminates, fails
            "```\ngrasp_cable();\nmove_compliant(pose(1) * pose_rpy([0.03, 0, 0.01], [0, 0, 0]), until = z_force >= 45.0);\n```"
                .to_string(),
        ]
    }

    #[test]
    fn ablation_collects_and_classifies() {
        let task = TaskSpec::with_defaults(TaskKind::CableUnroute);
        let client = MockClient::new(failing_corpus());
        let cells = run_hint_ablation(
            &task,
            &[BTreeSet::new()],
            4,
            &client,
            &SimConfig::default(),
            0,
        )
        .unwrap();
        assert_eq!(cells.len(), 1);
        let counts = &cells[0].counts;
        assert_eq!(counts["disallowed-control-flow"], 1);
        assert_eq!(counts["invalid-syntax-or-undefined"], 1);
        assert_eq!(counts["missing-search-pattern"], 1);
        assert_eq!(counts["wrong-force-values"], 1);
    }

    #[test]
    fn replayed_ablation_is_deterministic() {
        let task = TaskSpec::with_defaults(TaskKind::CableUnroute);
        let run = || {
            let client = MockClient::new(failing_corpus());
            run_hint_ablation(
                &task,
                &default_hint_ladder(),
                4,
                &client,
                &SimConfig::default(),
                0,
            )
            .unwrap()
        };
        let a = serde_json::to_string(&run()).unwrap();
        let b = serde_json::to_string(&run()).unwrap();
        assert_eq!(a, b);
    }
}
