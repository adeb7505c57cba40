//! Canonical pretty-printer. `parse(print_program(p))` is structurally equal
//! to `p`: one statement per line, single spaces around operators, kwargs in
//! declaration order.

use super::{PolicyProgram, PoseExpr, Statement};
use crate::control::{CompareOp, ConditionExpr, ConjunctionOp};
use std::fmt::Write;

pub fn print_program(program: &PolicyProgram) -> String {
    let mut out = String::new();
    for spanned in &program.statements {
        print_statement(&mut out, &spanned.statement);
        out.push_str(";\n");
    }
    out
}

fn print_statement(out: &mut String, statement: &Statement) {
    match statement {
        Statement::CompliantMove { pose, args } => {
            write!(out, "move_compliant({}", pose_text(pose)).unwrap();
            if let Some(v) = &args.stiffness {
                write!(out, ", stiffness = {}", vec_text(v)).unwrap();
            }
            if let Some(v) = &args.impedance {
                write!(out, ", impedance = {}", vec_text(v)).unwrap();
            }
            if let Some(v) = &args.inertia {
                write!(out, ", inertia = {}", vec_text(v)).unwrap();
            }
            if let Some(c) = &args.until {
                write!(out, ", until = {}", condition_text(c)).unwrap();
            }
            if let Some(t) = args.timeout {
                write!(out, ", timeout = {}", number(t)).unwrap();
            }
            if let Some(t) = args.tare {
                write!(out, ", tare = {t}").unwrap();
            }
            out.push(')');
        }
        Statement::PtpMove { pose } => {
            write!(out, "move_ptp({})", pose_text(pose)).unwrap();
        }
        Statement::Gripper { percent } => {
            write!(out, "move_gripper({})", number(*percent)).unwrap();
        }
        Statement::GraspCable => out.push_str("grasp_cable()"),
        Statement::PickUp { object } => {
            write!(out, "pick_up({object})").unwrap();
        }
        Statement::EstimatePose { object, binding } => {
            write!(out, "estimate_pose({object}, {binding})").unwrap();
        }
        Statement::LetPose { name, pose } => {
            write!(out, "let {name} = {}", pose_text(pose)).unwrap();
        }
    }
}

fn pose_text(pose: &PoseExpr) -> String {
    match pose {
        PoseExpr::Named(n) => format!("pose({n})"),
        PoseExpr::Rpy {
            translation,
            rotation,
        } => format!("pose_rpy({}, {})", vec_text(translation), vec_text(rotation)),
        PoseExpr::Ident(name) => name.clone(),
        PoseExpr::Multiply(a, b) => format!("{} * {}", pose_text(a), pose_text(b)),
    }
}

fn vec_text(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| number(*x)).collect();
    format!("[{}]", parts.join(", "))
}

pub(crate) fn condition_text(cond: &ConditionExpr) -> String {
    match cond {
        ConditionExpr::Comparison {
            op,
            variable,
            value,
        } => {
            let cmp = match op {
                CompareOp::Ge => ">=",
                CompareOp::Le => "<=",
                CompareOp::ApproxEq => "~=",
                CompareOp::ApproxNeq => "!~=",
            };
            format!("{} {} {}", variable.name(), cmp, number(*value))
        }
        ConditionExpr::Conjunction { op, children } => {
            let name = match op {
                ConjunctionOp::AllOf => "all",
                ConjunctionOp::AnyOf => "any",
            };
            let parts: Vec<String> = children.iter().map(condition_text).collect();
            format!("{}({})", name, parts.join(", "))
        }
    }
}

fn number(v: f64) -> String {
    // shortest round-trip decimal; f64 Display never prints exponents
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::parse;

    #[test]
    fn canonical_spacing() {
        let p = parse("move_compliant(pose(1),until=z_force>=0.4);").unwrap();
        assert_eq!(
            print_program(&p),
            "move_compliant(pose(1), until = z_force >= 0.4);\n"
        );
    }

    #[test]
    fn empty_program_prints_empty() {
        assert_eq!(print_program(&PolicyProgram::default()), "");
    }

    #[test]
    fn round_trip_is_structural_identity() {
        let src = r#"
            pick_up(peg);
            let target = pose(1) * pose_rpy([0, 0.001, -0.02], [0, 0, 1.5707963267948966]);
            move_compliant(target, stiffness = [400, 400, 400, 40, 40, 40], impedance = [1, 1, 1, 1, 1, 1], until = any(z_force >= 0.4, all(translation_error <= 0.001, rotation_error <= 0.02)), timeout = 3.5, tare = false);
            move_ptp(pose(1));
            move_gripper(100);
        "#;
        let p = parse(src).unwrap();
        let printed = print_program(&p);
        let reparsed = parse(&printed).unwrap();
        assert_eq!(p, reparsed);
        // printing is a fixed point
        assert_eq!(printed, print_program(&reparsed));
    }
}
