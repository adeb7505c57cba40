//! Static validation: everything the hint rules promise to enforce, returned
//! as data rather than errors so the harness can count and classify them.

use super::{PolicyProgram, PoseExpr, Span, Statement};
use crate::control::ConditionExpr;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Force thresholds the prompt documents as legal in strict mode.
pub const STRICT_FORCE_LIMIT: f64 = 0.4;
/// Default mode is permissive: the worked examples in the task prompts use
/// thresholds of a few newtons.
pub const DEFAULT_FORCE_LIMIT: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    DisallowedConstruct,
    UndefinedName,
    OutOfRangeValue,
    MalformedCondition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub span: Span,
    pub message: String,
}

/// Collect all rule violations in a parsed program. `strict_range` enforces
/// the documented [-0.4, 0.4] force-threshold range; otherwise +/-50 N.
pub fn validate(program: &PolicyProgram, strict_range: bool) -> Vec<Violation> {
    let force_limit = if strict_range {
        STRICT_FORCE_LIMIT
    } else {
        DEFAULT_FORCE_LIMIT
    };
    let mut violations = Vec::new();
    let mut defined: HashSet<&str> = HashSet::new();

    for spanned in &program.statements {
        let span = spanned.span;
        let out_of_range = |message: String| Violation {
            kind: ViolationKind::OutOfRangeValue,
            span,
            message,
        };
        match &spanned.statement {
            Statement::CompliantMove { pose, args } => {
                check_pose(pose, &defined, span, &mut violations);
                if let Some(stiffness) = &args.stiffness {
                    for (i, v) in stiffness.iter().enumerate() {
                        if !(v.is_finite() && *v > 0.0) {
                            violations.push(out_of_range(format!("stiffness[{i}] = {v}")));
                        }
                    }
                }
                if let Some(impedance) = &args.impedance {
                    for (i, v) in impedance.iter().enumerate() {
                        if !(v.is_finite() && *v > 0.0 && *v <= 1.0) {
                            violations.push(out_of_range(format!(
                                "impedance[{i}] = {v}, must lie in (0, 1]"
                            )));
                        }
                    }
                }
                if let Some(inertia) = &args.inertia {
                    for (i, v) in inertia.iter().enumerate() {
                        if !(v.is_finite() && *v > 0.0) {
                            violations.push(out_of_range(format!("inertia[{i}] = {v}")));
                        }
                    }
                }
                if let Some(timeout) = args.timeout {
                    if !(timeout.is_finite() && timeout > 0.0) {
                        violations.push(out_of_range(format!("timeout = {timeout}")));
                    }
                }
                if let Some(cond) = &args.until {
                    check_condition(cond, force_limit, span, &mut violations);
                }
            }
            Statement::PtpMove { pose } => {
                check_pose(pose, &defined, span, &mut violations);
            }
            Statement::Gripper { percent } => {
                if !(percent.is_finite() && (0.0..=100.0).contains(percent)) {
                    violations.push(out_of_range(format!(
                        "gripper percentage {percent} outside 0..=100"
                    )));
                }
            }
            Statement::GraspCable | Statement::PickUp { .. } => {}
            Statement::EstimatePose { binding, .. } => {
                defined.insert(binding);
            }
            Statement::LetPose { name, pose } => {
                check_pose(pose, &defined, span, &mut violations);
                defined.insert(name);
            }
        }
    }
    violations
}

fn check_pose(
    pose: &PoseExpr,
    defined: &HashSet<&str>,
    span: Span,
    violations: &mut Vec<Violation>,
) {
    match pose {
        PoseExpr::Named(_) => {}
        PoseExpr::Rpy {
            translation,
            rotation,
        } => {
            for v in translation.iter().chain(rotation.iter()) {
                if !v.is_finite() {
                    violations.push(Violation {
                        kind: ViolationKind::OutOfRangeValue,
                        span,
                        message: format!("non-finite pose component {v}"),
                    });
                }
            }
        }
        PoseExpr::Ident(name) => {
            if !defined.contains(name.as_str()) {
                violations.push(Violation {
                    kind: ViolationKind::UndefinedName,
                    span,
                    message: format!("`{name}` is not defined by any let or estimate_pose"),
                });
            }
        }
        PoseExpr::Multiply(a, b) => {
            check_pose(a, defined, span, violations);
            check_pose(b, defined, span, violations);
        }
    }
}

fn check_condition(
    cond: &ConditionExpr,
    force_limit: f64,
    span: Span,
    violations: &mut Vec<Violation>,
) {
    match cond {
        ConditionExpr::Comparison {
            variable, value, ..
        } => {
            if !value.is_finite() {
                violations.push(Violation {
                    kind: ViolationKind::OutOfRangeValue,
                    span,
                    message: format!("non-finite threshold {value}"),
                });
            } else if variable.is_force() && value.abs() > force_limit {
                violations.push(Violation {
                    kind: ViolationKind::OutOfRangeValue,
                    span,
                    message: format!(
                        "{} threshold {value} outside [-{force_limit}, {force_limit}]",
                        variable.name()
                    ),
                });
            }
        }
        ConditionExpr::Conjunction { children, .. } => {
            if children.is_empty() {
                violations.push(Violation {
                    kind: ViolationKind::MalformedCondition,
                    span,
                    message: "conjunction with no children".into(),
                });
            }
            for child in children {
                check_condition(child, force_limit, span, violations);
            }
        }
    }
}
