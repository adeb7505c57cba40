//! Termination conditions: threshold comparisons on the five status
//! variables, composed with ALL_OF / ANY_OF.

use super::ControllerStatus;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatusVar {
    XForce,
    YForce,
    ZForce,
    TranslationError,
    RotationError,
}

impl StatusVar {
    pub const ALL: [StatusVar; 5] = [
        StatusVar::XForce,
        StatusVar::YForce,
        StatusVar::ZForce,
        StatusVar::TranslationError,
        StatusVar::RotationError,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StatusVar::XForce => "x_force",
            StatusVar::YForce => "y_force",
            StatusVar::ZForce => "z_force",
            StatusVar::TranslationError => "translation_error",
            StatusVar::RotationError => "rotation_error",
        }
    }

    pub fn parse(name: &str) -> Option<StatusVar> {
        StatusVar::ALL.iter().copied().find(|v| v.name() == name)
    }

    pub fn is_force(&self) -> bool {
        matches!(self, StatusVar::XForce | StatusVar::YForce | StatusVar::ZForce)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompareOp {
    /// `>=`
    Ge,
    /// `<=`
    Le,
    /// `~=`: within eps_approx of the value
    ApproxEq,
    /// `!~=`
    ApproxNeq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjunctionOp {
    AllOf,
    AnyOf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConditionExpr {
    Comparison {
        op: CompareOp,
        variable: StatusVar,
        value: f64,
    },
    Conjunction {
        op: ConjunctionOp,
        children: Vec<ConditionExpr>,
    },
}

impl ConditionExpr {
    pub fn ge(variable: StatusVar, value: f64) -> Self {
        ConditionExpr::Comparison {
            op: CompareOp::Ge,
            variable,
            value,
        }
    }

    pub fn le(variable: StatusVar, value: f64) -> Self {
        ConditionExpr::Comparison {
            op: CompareOp::Le,
            variable,
            value,
        }
    }

    pub fn any_of(children: Vec<ConditionExpr>) -> Self {
        ConditionExpr::Conjunction {
            op: ConjunctionOp::AnyOf,
            children,
        }
    }

    pub fn all_of(children: Vec<ConditionExpr>) -> Self {
        ConditionExpr::Conjunction {
            op: ConjunctionOp::AllOf,
            children,
        }
    }
}

/// Evaluate a condition against a status sample. Total: every child is
/// visited, no short-circuit side effects. Unknown variables cannot occur;
/// `StatusVar` is closed by construction.
pub fn evaluate_condition(expr: &ConditionExpr, status: &ControllerStatus, eps_approx: f64) -> bool {
    match expr {
        ConditionExpr::Comparison { op, variable, value } => {
            let v = status.get(*variable);
            match op {
                CompareOp::Ge => v >= *value,
                CompareOp::Le => v <= *value,
                CompareOp::ApproxEq => (v - value).abs() <= eps_approx,
                CompareOp::ApproxNeq => (v - value).abs() > eps_approx,
            }
        }
        ConditionExpr::Conjunction { op, children } => {
            let flags: Vec<bool> = children
                .iter()
                .map(|c| evaluate_condition(c, status, eps_approx))
                .collect();
            match op {
                ConjunctionOp::AllOf => flags.iter().all(|f| *f),
                ConjunctionOp::AnyOf => flags.iter().any(|f| *f),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = 0.001;

    fn status(z_force: f64, translation_error: f64) -> ControllerStatus {
        ControllerStatus {
            x_force: 0.0,
            y_force: 0.0,
            z_force,
            translation_error,
            rotation_error: 0.0,
        }
    }

    #[test]
    fn ge_over_threshold() {
        let c = ConditionExpr::ge(StatusVar::ZForce, 0.4);
        assert!(evaluate_condition(&c, &status(0.5, 0.0), EPS));
        assert!(!evaluate_condition(&c, &status(0.3, 0.0), EPS));
    }

    #[test]
    fn approx_eq_within_eps() {
        let c = ConditionExpr::Comparison {
            op: CompareOp::ApproxEq,
            variable: StatusVar::TranslationError,
            value: 0.0,
        };
        assert!(evaluate_condition(&c, &status(0.0, 0.0005), EPS));
        assert!(!evaluate_condition(&c, &status(0.0, 0.002), EPS));
    }

    #[test]
    fn any_of_with_one_true_child() {
        let c = ConditionExpr::any_of(vec![
            ConditionExpr::ge(StatusVar::ZForce, 0.4),
            ConditionExpr::le(StatusVar::TranslationError, 0.001),
        ]);
        assert!(evaluate_condition(&c, &status(0.1, 0.0005), EPS));
    }

    proptest! {
        /// GE(v, a) true and a' <= a implies GE(v, a') true (dually for LE).
        #[test]
        fn threshold_monotonicity(v in -5.0f64..5.0, a in -5.0f64..5.0, delta in 0.0f64..5.0) {
            let s = status(v, 0.0);
            let ge_a = evaluate_condition(&ConditionExpr::ge(StatusVar::ZForce, a), &s, EPS);
            let ge_lower = evaluate_condition(&ConditionExpr::ge(StatusVar::ZForce, a - delta), &s, EPS);
            prop_assert!(!ge_a || ge_lower);
            let le_a = evaluate_condition(&ConditionExpr::le(StatusVar::ZForce, a), &s, EPS);
            let le_higher = evaluate_condition(&ConditionExpr::le(StatusVar::ZForce, a + delta), &s, EPS);
            prop_assert!(!le_a || le_higher);
        }

        /// ANY_OF[c] == ALL_OF[c] == c for singleton conjunctions.
        #[test]
        fn singleton_conjunction_equals_child(v in -5.0f64..5.0, threshold in -5.0f64..5.0) {
            let s = status(v, 0.0);
            let child = ConditionExpr::ge(StatusVar::ZForce, threshold);
            let direct = evaluate_condition(&child, &s, EPS);
            let any = evaluate_condition(&ConditionExpr::any_of(vec![child.clone()]), &s, EPS);
            let all = evaluate_condition(&ConditionExpr::all_of(vec![child]), &s, EPS);
            prop_assert_eq!(direct, any);
            prop_assert_eq!(direct, all);
        }
    }
}
