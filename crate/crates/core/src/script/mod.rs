//! MoveScript: the loop-free policy language the code-generation harness
//! targets. Grammar (statements end with `;`, `#` comments allowed):
//!
//! ```text
//! program  := { statement ";" }
//! statement := move | gripper | grasp | pickup | estimate | let
//! move     := ("move_compliant" | "move_ptp") "(" pose_expr { "," kwarg } ")"
//! kwarg    := "stiffness" "=" vec6 | "impedance" "=" vec6 | "inertia" "=" vec6
//!           | "until" "=" cond | "timeout" "=" number | "tare" "=" bool
//! gripper  := "move_gripper" "(" number ")"
//! grasp    := "grasp_cable" "(" ")"
//! pickup   := "pick_up" "(" ident ")"
//! estimate := "estimate_pose" "(" ident "," ident ")"   # (object, binding)
//! let      := "let" ident "=" pose_expr
//! pose_expr := pose_atom { "*" pose_atom }
//! pose_atom := "pose" "(" int ")" | "pose_rpy" "(" vec3 "," vec3 ")" | ident
//! cond     := term | ("any" | "all") "(" cond { "," cond } ")"
//! term     := var cmp number
//! var      := "x_force" | "y_force" | "z_force" | "translation_error" | "rotation_error"
//! cmp      := ">=" | "<=" | "~=" | "!~="
//! ```
//!
//! `while`, `for`, `if` and `def` are reserved-illegal: the grammar has no
//! loops or branches, and their appearance anywhere is a parse error.

mod interp;
mod lexer;
mod parser;
mod print;
mod validate;

pub use interp::{interpret, InterpConfig, RolloutTrace, StatementRecord, StatementResult};
pub use parser::parse;
pub use print::print_program;
pub use validate::{validate, Violation, ViolationKind, DEFAULT_FORCE_LIMIT, STRICT_FORCE_LIMIT};

use crate::control::ConditionExpr;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParseErrorKind {
    Syntax,
    /// A loop/branch keyword appeared.
    DisallowedConstruct,
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
#[error("{}:{}: {message}", span.line, span.col)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
    pub message: String,
}

/// A pose expression: composition chain over reference poses, literal
/// transforms, and bound names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PoseExpr {
    /// `pose(n)`: a task-annotated reference pose.
    Named(u32),
    /// `pose_rpy([x,y,z],[r,p,y])`.
    Rpy {
        translation: [f64; 3],
        rotation: [f64; 3],
    },
    /// A `let` or `estimate_pose` binding.
    Ident(String),
    /// `a * b`: apply `b` on top of `a`.
    Multiply(Box<PoseExpr>, Box<PoseExpr>),
}

/// Keyword arguments of a compliant move; `None` means "use the default".
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MoveArgs {
    pub stiffness: Option<[f64; 6]>,
    pub impedance: Option<[f64; 6]>,
    pub inertia: Option<[f64; 6]>,
    pub until: Option<ConditionExpr>,
    pub timeout: Option<f64>,
    pub tare: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Statement {
    CompliantMove { pose: PoseExpr, args: MoveArgs },
    PtpMove { pose: PoseExpr },
    Gripper { percent: f64 },
    GraspCable,
    PickUp { object: String },
    EstimatePose { object: String, binding: String },
    LetPose { name: String, pose: PoseExpr },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpannedStatement {
    pub statement: Statement,
    pub span: Span,
}

/// Equality is structural: source locations don't count, so a program equals
/// its canonical reprint.
impl PartialEq for SpannedStatement {
    fn eq(&self, other: &Self) -> bool {
        self.statement == other.statement
    }
}

/// A parsed MoveScript program: an ordered, loop-free statement sequence.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PolicyProgram {
    pub statements: Vec<SpannedStatement>,
}

impl PolicyProgram {
    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Statement> {
        self.statements.iter().map(|s| &s.statement)
    }
}

/// Program file extension for policies on disk.
pub const PROGRAM_EXTENSION: &str = "mvs";
