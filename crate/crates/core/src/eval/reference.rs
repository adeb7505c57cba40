//! Canned reference policies shipped with the benchmark, plus the frozen
//! expert-scripted baseline. One program per task; the evaluation protocol
//! and the action-space rewrites start from these.

use super::EvalError;
use crate::script::{parse, validate, PolicyProgram};
use crate::sim::{PegShape, TaskKind};

pub fn reference_program_text(kind: TaskKind) -> &'static str {
    match kind {
        TaskKind::FmbInsertion {
            shape: PegShape::Circle,
        } => include_str!("../../assets/policies/fmb-circle.mvs"),
        TaskKind::FmbInsertion {
            shape: PegShape::Star,
        } => include_str!("../../assets/policies/fmb-star.mvs"),
        TaskKind::FmbInsertion {
            shape: PegShape::HalfPipe,
        } => include_str!("../../assets/policies/fmb-halfpipe.mvs"),
        TaskKind::CableUnroute => include_str!("../../assets/policies/rgmc-unroute.mvs"),
        TaskKind::CableRoute => include_str!("../../assets/policies/rgmc-route.mvs"),
        TaskKind::ConnectorInsertion { .. } => {
            include_str!("../../assets/policies/nist-connector.mvs")
        }
    }
}

/// The single expert baseline: tuned once on the circle setting and then
/// frozen, with no rotation search. Applies to the insertion tasks only.
pub fn scripted_program_text() -> &'static str {
    include_str!("../../assets/policies/scripted-fmb.mvs")
}

pub fn reference_program(kind: TaskKind) -> PolicyProgram {
    load_program(reference_program_text(kind)).expect("shipped reference programs are valid")
}

pub fn scripted_program() -> PolicyProgram {
    load_program(scripted_program_text()).expect("shipped scripted baseline is valid")
}

/// Parse and statically validate program text; violations are an error here,
/// not data, because whoever loads a concrete file needs it runnable.
pub fn load_program(text: &str) -> Result<PolicyProgram, EvalError> {
    let program = parse(text).map_err(|e| EvalError::InvalidProgram(e.to_string()))?;
    let violations = validate(&program, false);
    if let Some(v) = violations.first() {
        return Err(EvalError::InvalidProgram(format!(
            "{} violation at {}:{}: {}",
            violations.len(),
            v.span.line,
            v.span.col,
            v.message
        )));
    }
    Ok(program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{task_kind_from_name, ALL_TASK_NAMES};

    #[test]
    fn all_reference_programs_parse_and_validate() {
        for name in ALL_TASK_NAMES {
            let kind = task_kind_from_name(name).unwrap();
            let program = reference_program(kind);
            assert!(!program.is_empty(), "{name} reference is empty");
        }
        assert!(!scripted_program().is_empty());
    }

    #[test]
    fn unroute_reference_mirrors_the_up_right_left_up_strategy() {
        let program = reference_program(TaskKind::CableUnroute);
        // grasp + four moves
        assert_eq!(program.len(), 5);
    }
}
