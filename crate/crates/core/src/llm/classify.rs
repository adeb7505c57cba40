//! Failure taxonomy for generated candidates, ordered by how much operator
//! intervention fixing each class takes.

use super::extract::extract_program;
use super::LlmError;
use crate::script::{
    parse, validate, ParseErrorKind, PolicyProgram, PoseExpr, RolloutTrace, Statement,
    ViolationKind,
};
use serde::{Deserialize, Serialize};

/// Declaration order is severity order, most intervention first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ErrorCategory {
    InvalidSyntaxOrUndefined,
    DisallowedControlFlow,
    MissingSearchPattern,
    WrongForceValues,
}

impl ErrorCategory {
    pub const ALL: [ErrorCategory; 4] = [
        ErrorCategory::InvalidSyntaxOrUndefined,
        ErrorCategory::DisallowedControlFlow,
        ErrorCategory::MissingSearchPattern,
        ErrorCategory::WrongForceValues,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ErrorCategory::InvalidSyntaxOrUndefined => "invalid-syntax-or-undefined",
            ErrorCategory::DisallowedControlFlow => "disallowed-control-flow",
            ErrorCategory::MissingSearchPattern => "missing-search-pattern",
            ErrorCategory::WrongForceValues => "wrong-force-values",
        }
    }
}

/// Classify a failing candidate. `trace` carries the rollout when one ran;
/// `search_task` says whether the task requires exploratory motion. Calling
/// this on a successful rollout is a misuse.
pub fn classify_failure(
    candidate: &str,
    trace: Option<&RolloutTrace>,
    search_task: bool,
) -> Result<ErrorCategory, LlmError> {
    if let Some(t) = trace {
        if t.success {
            return Err(LlmError::Misuse(
                "classify_failure called on a successful candidate".into(),
            ));
        }
    }
    let program = match parse(&extract_program(candidate)) {
        Err(e) => {
            return Ok(match e.kind {
                ParseErrorKind::DisallowedConstruct => ErrorCategory::DisallowedControlFlow,
                ParseErrorKind::Syntax => ErrorCategory::InvalidSyntaxOrUndefined,
            })
        }
        Ok(p) => p,
    };
    let violations = validate(&program, false);
    if violations
        .iter()
        .any(|v| v.kind == ViolationKind::DisallowedConstruct)
    {
        return Ok(ErrorCategory::DisallowedControlFlow);
    }
    if violations.iter().any(|v| {
        matches!(
            v.kind,
            ViolationKind::UndefinedName | ViolationKind::MalformedCondition
        )
    }) {
        return Ok(ErrorCategory::InvalidSyntaxOrUndefined);
    }
    if !violations.is_empty() {
        // only out-of-range values remain: mis-specified forces or parameters
        return Ok(ErrorCategory::WrongForceValues);
    }
    if search_task && !has_exploration(&program) {
        return Ok(ErrorCategory::MissingSearchPattern);
    }
    Ok(ErrorCategory::WrongForceValues)
}

/// A program explores when any move target carries a lateral (x/y) or
/// rotational offset; a straight push along z is not a search.
fn has_exploration(program: &PolicyProgram) -> bool {
    program.iter().any(|statement| match statement {
        Statement::CompliantMove { pose, .. } | Statement::PtpMove { pose } => {
            pose_has_lateral_or_rotation(pose)
        }
        Statement::LetPose { pose, .. } => pose_has_lateral_or_rotation(pose),
        _ => false,
    })
}

fn pose_has_lateral_or_rotation(pose: &PoseExpr) -> bool {
    match pose {
        PoseExpr::Rpy {
            translation,
            rotation,
        } => {
            translation[0].abs() > 1e-9
                || translation[1].abs() > 1e-9
                || rotation.iter().any(|r| r.abs() > 1e-9)
        }
        PoseExpr::Multiply(a, b) => {
            pose_has_lateral_or_rotation(a) || pose_has_lateral_or_rotation(b)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn for_loop_is_control_flow() {
        let c = "```\nfor waypoint in waypoints: move(waypoint)\n```";
        assert_eq!(
            classify_failure(c, None, true).unwrap(),
            ErrorCategory::DisallowedControlFlow
        );
    }

    #[test]
    fn undefined_name_is_syntax_class() {
        let c = "```\nmove_compliant(pose2);\n```";
        assert_eq!(
            classify_failure(c, None, true).unwrap(),
            ErrorCategory::InvalidSyntaxOrUndefined
        );
    }

    #[test]
    fn up_only_program_misses_the_search() {
        let c = "```\ngrasp_cable();\nmove_compliant(pose(1) * pose_rpy([0, 0, 0.02], [0, 0, 0]), until = translation_error <= 0.001);\n```";
        assert_eq!(
            classify_failure(c, None, true).unwrap(),
            ErrorCategory::MissingSearchPattern
        );
    }

    #[test]
    fn valid_searching_program_that_timed_out_is_force_values() {
        let c = "```\ngrasp_cable();\nmove_compliant(pose(1) * pose_rpy([0.02, 0, 0.01], [0, 0, 0]), until = z_force >= 30.0);\n```";
        let trace = RolloutTrace {
            statements: vec![],
            aborted: None,
            success: false,
        };
        assert_eq!(
            classify_failure(c, Some(&trace), true).unwrap(),
            ErrorCategory::WrongForceValues
        );
    }

    #[test]
    fn successful_trace_is_misuse() {
        let trace = RolloutTrace {
            statements: vec![],
            aborted: None,
            success: true,
        };
        assert!(classify_failure("x", Some(&trace), true).is_err());
    }

    #[test]
    fn severity_order_matches_declaration() {
        assert!(ErrorCategory::InvalidSyntaxOrUndefined < ErrorCategory::DisallowedControlFlow);
        assert!(ErrorCategory::MissingSearchPattern < ErrorCategory::WrongForceValues);
    }
}
