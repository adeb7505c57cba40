//! Action-space rewrites: take the selected program and overwrite its control
//! API, so comparisons across action spaces share the same waypoints.

use crate::control::{CompareOp, ConditionExpr, StatusVar};
use crate::script::{MoveArgs, PolicyProgram, Statement};

/// Point-to-point rewrite: every compliant move becomes a stiff move to the
/// same pose expression; stiffness and termination parameters disappear with
/// the action space.
pub fn ptp_rewrite(program: &PolicyProgram) -> PolicyProgram {
    map_moves(program, |pose, _| Statement::PtpMove { pose })
}

/// Fixed-compliance rewrite: preset stiffness (the defaults) and a fixed
/// translation-error termination; the policy's force constraints are hidden.
/// Timeout and taring survive, they belong to the executor, not the policy.
pub fn fixed_compliance_rewrite(program: &PolicyProgram, tolerance: f64) -> PolicyProgram {
    map_moves(program, |pose, args| Statement::CompliantMove {
        pose,
        args: MoveArgs {
            stiffness: None,
            impedance: None,
            inertia: None,
            until: Some(ConditionExpr::Comparison {
                op: CompareOp::Le,
                variable: StatusVar::TranslationError,
                value: tolerance,
            }),
            timeout: args.timeout,
            tare: args.tare,
        },
    })
}

fn map_moves(
    program: &PolicyProgram,
    f: impl Fn(crate::script::PoseExpr, MoveArgs) -> Statement,
) -> PolicyProgram {
    let mut out = program.clone();
    for spanned in &mut out.statements {
        if let Statement::CompliantMove { pose, args } = &spanned.statement {
            spanned.statement = f(pose.clone(), args.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::{parse, print_program, PoseExpr};

    fn poses(program: &PolicyProgram) -> Vec<PoseExpr> {
        program
            .iter()
            .filter_map(|s| match s {
                Statement::CompliantMove { pose, .. } | Statement::PtpMove { pose } => {
                    Some(pose.clone())
                }
                _ => None,
            })
            .collect()
    }

    #[test]
    fn ptp_rewrite_preserves_waypoints() {
        let program = parse(
            "grasp_cable();\
             move_compliant(pose(1) * pose_rpy([0, 0, 0.01], [0, 0, 0]), until = z_force <= -0.4);\
             move_compliant(pose(1) * pose_rpy([0.03, 0, 0.01], [0, 0, 0]), until = x_force <= -0.4, tare = false);",
        )
        .unwrap();
        let rewritten = ptp_rewrite(&program);
        assert_eq!(poses(&program), poses(&rewritten));
        assert!(print_program(&rewritten).contains("move_ptp"));
        assert!(!print_program(&rewritten).contains("until"));
    }

    #[test]
    fn fixed_compliance_strips_force_constraints() {
        let program = parse(
            "move_compliant(pose(1), stiffness = [100, 100, 100, 10, 10, 10], until = z_force >= 0.4, timeout = 2.0, tare = false);",
        )
        .unwrap();
        let rewritten = fixed_compliance_rewrite(&program, 0.001);
        let text = print_program(&rewritten);
        assert!(!text.contains("stiffness"));
        assert!(!text.contains("z_force"));
        assert!(text.contains("translation_error <= 0.001"));
        assert!(text.contains("timeout = 2"));
        assert!(text.contains("tare = false"));
        assert_eq!(poses(&program), poses(&rewritten));
    }
}
