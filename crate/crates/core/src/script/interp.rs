//! Interpreter: runs a validated program against a world, one statement at a
//! time. A fault or affordance error aborts the remainder; the trace records
//! everything either way and ends with the task success verdict.

use super::{PolicyProgram, PoseExpr, Statement};
use crate::control::{
    execute_compliant_move, execute_ptp_move, ExecConfig, MoveCommand, MoveOutcome, MoveStatus,
    StiffnessSpec,
};
use crate::pose::{pose_multiply, pose_rpy, Pose};
use crate::sim::World;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpConfig {
    pub exec: ExecConfig,
    /// Applied when a move omits stiffness/impedance/inertia kwargs.
    pub default_spec: StiffnessSpec,
    pub default_tare: bool,
}

impl Default for InterpConfig {
    fn default() -> Self {
        InterpConfig {
            exec: ExecConfig::default(),
            default_spec: StiffnessSpec::benchmark_default(),
            default_tare: true,
        }
    }
}

impl InterpConfig {
    pub fn from_exec(exec: ExecConfig) -> Self {
        InterpConfig {
            exec,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StatementResult {
    Move(MoveOutcome),
    /// Gripper/grasp/pick/estimate/let completed.
    Done,
    /// Affordance or pose-resolution error; aborts the program.
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatementRecord {
    pub index: usize,
    pub result: StatementResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RolloutTrace {
    pub statements: Vec<StatementRecord>,
    /// Why execution stopped early, if it did.
    pub aborted: Option<String>,
    /// Task success predicate on the final world state.
    pub success: bool,
}

impl RolloutTrace {
    pub fn faulted(&self) -> bool {
        self.statements.iter().any(|r| {
            matches!(
                &r.result,
                StatementResult::Move(MoveOutcome {
                    status: MoveStatus::Faulted,
                    ..
                })
            )
        })
    }

    pub fn move_outcomes(&self) -> impl Iterator<Item = &MoveOutcome> {
        self.statements.iter().filter_map(|r| match &r.result {
            StatementResult::Move(outcome) => Some(outcome),
            _ => None,
        })
    }
}

/// Execute every statement in order against the world. Call only after
/// `validate` returned no violations.
pub fn interpret(program: &PolicyProgram, world: &mut World, cfg: &InterpConfig) -> RolloutTrace {
    let mut records = Vec::new();
    let mut bindings: HashMap<String, Pose> = HashMap::new();
    let mut aborted = None;

    for (index, spanned) in program.statements.iter().enumerate() {
        let result = run_statement(&spanned.statement, world, cfg, &mut bindings);
        let stop = match &result {
            StatementResult::Move(outcome) if outcome.status == MoveStatus::Faulted => {
                Some(format!("statement {index} faulted"))
            }
            StatementResult::Error(message) => Some(format!("statement {index}: {message}")),
            _ => None,
        };
        records.push(StatementRecord { index, result });
        if let Some(reason) = stop {
            aborted = Some(reason);
            break;
        }
    }

    RolloutTrace {
        statements: records,
        aborted,
        success: world.check_success(),
    }
}

fn run_statement(
    statement: &Statement,
    world: &mut World,
    cfg: &InterpConfig,
    bindings: &mut HashMap<String, Pose>,
) -> StatementResult {
    match statement {
        Statement::CompliantMove { pose, args } => {
            let target = match resolve_pose(pose, world, bindings) {
                Ok(p) => p,
                Err(e) => return StatementResult::Error(e),
            };
            let mut spec = cfg.default_spec;
            if let Some(v) = args.stiffness {
                spec.max_cartesian_stiffness = nalgebra::Vector6::from_column_slice(&v);
            }
            if let Some(v) = args.impedance {
                spec.target_impedance = nalgebra::Vector6::from_column_slice(&v);
            }
            if let Some(v) = args.inertia {
                spec.virtual_cartesian_inertia = nalgebra::Vector6::from_column_slice(&v);
            }
            let cmd = MoveCommand {
                target,
                stiffness: spec,
                termination: args.until.clone(),
                timeout_s: args.timeout.unwrap_or(cfg.exec.default_timeout_s),
                tare_ft_sensor: args.tare.unwrap_or(cfg.default_tare),
            };
            StatementResult::Move(execute_compliant_move(world, &cmd, &cfg.exec))
        }
        Statement::PtpMove { pose } => match resolve_pose(pose, world, bindings) {
            Ok(target) => StatementResult::Move(execute_ptp_move(world, target, &cfg.exec)),
            Err(e) => StatementResult::Error(e),
        },
        Statement::Gripper { percent } => match world.move_gripper(*percent) {
            Ok(()) => StatementResult::Done,
            Err(e) => StatementResult::Error(e.to_string()),
        },
        Statement::GraspCable => match world.grasp_cable() {
            Ok(()) => StatementResult::Done,
            Err(e) => StatementResult::Error(e.to_string()),
        },
        Statement::PickUp { object } => match world.pick_up(object) {
            Ok(()) => StatementResult::Done,
            Err(e) => StatementResult::Error(e.to_string()),
        },
        Statement::EstimatePose { object, binding } => {
            match world.estimate_and_update_pose(object) {
                Ok(pose) => {
                    bindings.insert(binding.clone(), pose);
                    StatementResult::Done
                }
                Err(e) => StatementResult::Error(e.to_string()),
            }
        }
        Statement::LetPose { name, pose } => match resolve_pose(pose, world, bindings) {
            Ok(p) => {
                bindings.insert(name.clone(), p);
                StatementResult::Done
            }
            Err(e) => StatementResult::Error(e),
        },
    }
}

fn resolve_pose(
    expr: &PoseExpr,
    world: &World,
    bindings: &HashMap<String, Pose>,
) -> Result<Pose, String> {
    match expr {
        PoseExpr::Named(index) => world.named_pose(*index).map_err(|e| e.to_string()),
        PoseExpr::Rpy {
            translation,
            rotation,
        } => pose_rpy(*translation, *rotation).map_err(|e| e.to_string()),
        PoseExpr::Ident(name) => bindings
            .get(name)
            .copied()
            .ok_or_else(|| format!("`{name}` is not bound")),
        PoseExpr::Multiply(a, b) => {
            let pa = resolve_pose(a, world, bindings)?;
            let pb = resolve_pose(b, world, bindings)?;
            Ok(pose_multiply(&pa, &pb))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::parse;
    use crate::sim::{spawn_task, PegShape, TaskKind, TaskSpec};

    fn circle_world() -> World {
        spawn_task(
            &TaskSpec::with_defaults(TaskKind::FmbInsertion {
                shape: PegShape::Circle,
            }),
            0,
        )
    }

    #[test]
    fn empty_program_reports_initial_success_state() {
        let mut world = circle_world();
        let trace = interpret(&PolicyProgram::default(), &mut world, &InterpConfig::default());
        assert!(trace.statements.is_empty());
        assert!(!trace.success);
        assert!(trace.aborted.is_none());
    }

    #[test]
    fn order_preserved_and_indexed() {
        let program = parse(
            "pick_up(peg);\
             move_compliant(pose(1) * pose_rpy([0, 0, -0.025], [0, 0, 0]), until = z_force >= 0.4, timeout = 3.0);\
             move_compliant(pose(1) * pose_rpy([0, 0, -0.02], [0, 0, 0]), until = z_force >= 2.0, timeout = 3.0);",
        )
        .unwrap();
        let mut world = circle_world();
        let trace = interpret(&program, &mut world, &InterpConfig::default());
        assert_eq!(trace.statements.len(), 3);
        for (i, r) in trace.statements.iter().enumerate() {
            assert_eq!(r.index, i);
        }
        assert!(trace.success, "aligned circle press should insert");
    }

    #[test]
    fn runtime_error_aborts_remaining_statements() {
        let program = parse("pick_up(nothing); move_gripper(50);").unwrap();
        let mut world = circle_world();
        let trace = interpret(&program, &mut world, &InterpConfig::default());
        assert_eq!(trace.statements.len(), 1);
        assert!(trace.aborted.is_some());
    }

    #[test]
    fn fault_aborts_program() {
        // stiff move straight into the tabletop next to the bore
        let program = parse(
            "pick_up(peg);\
             move_ptp(pose(1) * pose_rpy([0.005, 0, -0.02], [0, 0, 0]));\
             move_gripper(100);",
        )
        .unwrap();
        let mut world = circle_world();
        let trace = interpret(&program, &mut world, &InterpConfig::default());
        assert!(trace.faulted());
        assert_eq!(trace.statements.len(), 2, "gripper statement must not run");
        assert!(!trace.success);
    }
}
