//! The evaluation protocol: obtain one program per (task, method), then run
//! the requested number of seeded rollouts and aggregate.

use super::reference::{load_program, reference_program_text, scripted_program_text};
use super::report::{Report, RolloutSummary, StatementSummary};
use super::rewrite::{fixed_compliance_rewrite, ptp_rewrite};
use super::{EvalError, Method, ProgramSource};
use crate::control::MoveStatus;
use crate::llm::{assemble_prompt, bundle_for_task, generate_candidates, select_best, ChatClient};
use crate::script::{interpret, print_program, InterpConfig, PolicyProgram, StatementResult};
use crate::sim::{spawn_task, CableStart, SimConfig, StartSide, TaskKind, TaskSpec};

/// One evaluation cell of the protocol. Defaults mirror the benchmark:
/// 10 rollouts, best of 5 generations.
#[derive(Debug, Clone)]
pub struct EvalRequest {
    pub task: TaskSpec,
    pub method: Method,
    pub n_evals: u32,
    pub num_samples: u32,
    pub seed: u64,
    pub strict_range: bool,
}

impl EvalRequest {
    pub fn new(task: TaskSpec, method: Method) -> Self {
        EvalRequest {
            task,
            method,
            n_evals: 10,
            num_samples: 5,
            seed: 0,
            strict_range: false,
        }
    }
}

/// World seed for rollout `i` of an evaluation.
pub fn world_seed(seed: u64, rollout: u32) -> u64 {
    seed.wrapping_add(rollout as u64)
}

/// Resolve the program a method runs: canned, scripted, generated, or an
/// action-space rewrite of one of those. `Ok(None)` means generation produced
/// no valid candidate (reported as zero successes with a reason).
pub fn obtain_program(
    req: &EvalRequest,
    sim: &SimConfig,
    client: Option<&dyn ChatClient>,
    notes: &mut Vec<String>,
) -> Result<Option<PolicyProgram>, EvalError> {
    resolve_method(&req.method, req, sim, client, notes)
}

fn resolve_method(
    method: &Method,
    req: &EvalRequest,
    sim: &SimConfig,
    client: Option<&dyn ChatClient>,
    notes: &mut Vec<String>,
) -> Result<Option<PolicyProgram>, EvalError> {
    match method {
        Method::Scripted => {
            if !matches!(req.task.kind, TaskKind::FmbInsertion { .. }) {
                return Err(EvalError::IncompatibleMethod(
                    "the scripted baseline exists only for the insertion tasks".into(),
                ));
            }
            Ok(Some(load_program(scripted_program_text())?))
        }
        Method::Reference => Ok(Some(load_program(reference_program_text(req.task.kind))?)),
        Method::Canned { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| EvalError::Io(format!("{}: {e}", path.display())))?;
            Ok(Some(load_program(&text)?))
        }
        Method::Ours { shots } => {
            let Some(client) = client else {
                return Err(EvalError::Llm(crate::llm::LlmError::GenerationUnavailable(
                    "no client configured; set an endpoint or a replay cache".into(),
                )));
            };
            let bundle = bundle_for_task(req.task.kind, *shots);
            let prompt = assemble_prompt(&bundle);
            let candidates = generate_candidates(&prompt, client, req.num_samples)?;
            match select_best(&candidates, req.strict_range) {
                Some(program) => Ok(Some(program)),
                None => {
                    notes.push(format!(
                        "no valid program among {} candidates",
                        candidates.len()
                    ));
                    Ok(None)
                }
            }
        }
        Method::PtpCodegen { base } => {
            let program = resolve_source(base, req, sim, client, notes)?;
            notes.push(
                "action space rewritten to point-to-point; waypoints preserved".to_string(),
            );
            Ok(program.map(|p| ptp_rewrite(&p)))
        }
        Method::FixedCompliance { base } => {
            let program = resolve_source(base, req, sim, client, notes)?;
            notes.push(
                "action space rewritten to fixed compliance; force constraints hidden"
                    .to_string(),
            );
            Ok(program.map(|p| fixed_compliance_rewrite(&p, fc_tolerance(sim))))
        }
    }
}

fn resolve_source(
    source: &ProgramSource,
    req: &EvalRequest,
    sim: &SimConfig,
    client: Option<&dyn ChatClient>,
    notes: &mut Vec<String>,
) -> Result<Option<PolicyProgram>, EvalError> {
    match source {
        ProgramSource::Reference => Ok(Some(load_program(reference_program_text(
            req.task.kind,
        ))?)),
        ProgramSource::Canned(path) => resolve_method(
            &Method::Canned { path: path.clone() },
            req,
            sim,
            client,
            notes,
        ),
        ProgramSource::Ours { shots } => {
            resolve_method(&Method::Ours { shots: *shots }, req, sim, client, notes)
        }
    }
}

fn fc_tolerance(_sim: &SimConfig) -> f64 {
    0.001
}

/// Run the full protocol for one cell and aggregate a report.
pub fn run_evaluation(
    req: &EvalRequest,
    sim: &SimConfig,
    client: Option<&dyn ChatClient>,
) -> Result<Report, EvalError> {
    let started = std::time::Instant::now();
    let mut notes = Vec::new();
    let program = obtain_program(req, sim, client, &mut notes)?;
    let mut report = Report {
        task: crate::sim::task_name(req.task.kind).to_string(),
        method: req.method.name(),
        n_evals: req.n_evals,
        successes: 0,
        failures: 0,
        faults: 0,
        seed: req.seed,
        program: program.as_ref().map(print_program),
        notes,
        rollouts: Vec::new(),
        wall_clock_s: 0.0,
    };
    if let Some(program) = &program {
        run_rollouts(&mut report, program, &req.task, req.seed, req.n_evals, sim);
    } else {
        report.failures = req.n_evals;
    }
    report.wall_clock_s = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Run `n_evals` seeded rollouts of one program and fold them into a report.
pub fn run_rollouts(
    report: &mut Report,
    program: &PolicyProgram,
    task: &TaskSpec,
    seed: u64,
    n_evals: u32,
    sim: &SimConfig,
) {
    let interp_cfg = InterpConfig::from_exec(sim.control);
    for i in 0..n_evals {
        let ws = world_seed(seed, i);
        let mut world = spawn_task(task, ws);
        let trace = interpret(program, &mut world, &interp_cfg);
        let faulted = trace.faulted();
        let success = trace.success && !faulted;
        if faulted {
            report.faults += 1;
        } else if success {
            report.successes += 1;
        } else {
            report.failures += 1;
        }
        report.rollouts.push(RolloutSummary {
            world_seed: ws,
            success,
            faulted,
            aborted: trace.aborted.clone(),
            statements: trace
                .statements
                .iter()
                .map(|record| match &record.result {
                    StatementResult::Move(outcome) => StatementSummary {
                        index: record.index,
                        kind: "move".into(),
                        status: match outcome.status {
                            MoveStatus::Terminated => "terminated".into(),
                            MoveStatus::TimedOut => "timed-out".into(),
                            MoveStatus::Faulted => "faulted".into(),
                        },
                        elapsed_s: outcome.elapsed_s,
                        final_status: Some(outcome.final_status),
                    },
                    StatementResult::Done => StatementSummary {
                        index: record.index,
                        kind: "affordance".into(),
                        status: "done".into(),
                        elapsed_s: 0.0,
                        final_status: None,
                    },
                    StatementResult::Error(e) => StatementSummary {
                        index: record.index,
                        kind: "affordance".into(),
                        status: format!("error: {e}"),
                        elapsed_s: 0.0,
                        final_status: None,
                    },
                })
                .collect(),
        });
    }
}

/// The robustness study: one program, evaluated from both forced start sides.
/// Returns (left, right).
pub fn run_robustness(
    req: &EvalRequest,
    sim: &SimConfig,
    client: Option<&dyn ChatClient>,
) -> Result<(Report, Report), EvalError> {
    if req.task.kind != TaskKind::CableUnroute {
        return Err(EvalError::IncompatibleMethod(
            "the robustness study runs on the unroute task".into(),
        ));
    }
    let mut notes = Vec::new();
    let program = obtain_program(req, sim, client, &mut notes)?;
    let mut out = Vec::new();
    for side in [StartSide::Left, StartSide::Right] {
        let started = std::time::Instant::now();
        let mut task = req.task.clone();
        task.cable_start = CableStart::Forced(side);
        let mut report = Report {
            task: format!(
                "{}:{}",
                crate::sim::task_name(req.task.kind),
                match side {
                    StartSide::Left => "left",
                    StartSide::Right => "right",
                }
            ),
            method: req.method.name(),
            n_evals: req.n_evals,
            successes: 0,
            failures: 0,
            faults: 0,
            seed: req.seed,
            program: program.as_ref().map(print_program),
            notes: notes.clone(),
            rollouts: Vec::new(),
            wall_clock_s: 0.0,
        };
        if let Some(program) = &program {
            run_rollouts(&mut report, program, &task, req.seed, req.n_evals, sim);
        } else {
            report.failures = req.n_evals;
        }
        report.wall_clock_s = started.elapsed().as_secs_f64();
        out.push(report);
    }
    let right = out.pop().expect("two sides");
    let left = out.pop().expect("two sides");
    Ok((left, right))
}
