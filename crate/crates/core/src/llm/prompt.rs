//! Prompt assembly from the four strategy parts: task description, control
//! API documentation, hints, and worked examples. The API text is generated
//! from the language grammar and the executor defaults so it never drifts
//! from the implementation.

use crate::control::{ExecConfig, StiffnessSpec};
use crate::script::{DEFAULT_FORCE_LIMIT, STRICT_FORCE_LIMIT};
use crate::sim::{PegShape, TaskKind};
use std::collections::BTreeSet;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hint {
    /// Keyword nudge toward exploratory motion patterns.
    PatternSearch,
    /// Extra rules about undefined names and control flow.
    ExtraRules,
    /// Ask for pseudocode before the final program.
    PseudocodeFirst,
}

impl Hint {
    pub const ALL: [Hint; 3] = [Hint::PatternSearch, Hint::ExtraRules, Hint::PseudocodeFirst];

    pub fn text(&self) -> &'static str {
        match self {
            Hint::PatternSearch => {
                "Hint: reference poses may be imprecise and randomized. Perform a pattern \
                 search: probe systematically with small lateral or rotational motions and \
                 use the sensed forces to detect openings and snags."
            }
            Hint::ExtraRules => {
                "Rules:\n\
                 - Don't define any new methods.\n\
                 - Don't call any undefined methods or access undefined variables.\n\
                 - Don't add any if statements or while loops.\n\
                 - Don't build for loops over waypoints; write each move out."
            }
            Hint::PseudocodeFirst => {
                "First explain your strategy as a short numbered plan in plain language, \
                 then translate it into one final fenced code block."
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Hint::PatternSearch => "pattern-search",
            Hint::ExtraRules => "extra-rules",
            Hint::PseudocodeFirst => "pseudocode-first",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Zero,
    Few,
}

/// The four prompt parts. The API text is identical across tasks; hints and
/// examples are fixed per environment; the task description varies per task.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptBundle {
    pub task_description: String,
    pub api_doc: String,
    pub hints: BTreeSet<Hint>,
    pub examples: Vec<String>,
}

/// Deterministic concatenation in fixed order: description, API, hints,
/// examples. Zero-shot bundles emit no examples section at all, and adding
/// an example only appends text.
pub fn assemble_prompt(bundle: &PromptBundle) -> String {
    let mut out = String::new();
    out.push_str(&bundle.task_description);
    out.push_str("\n\n");
    out.push_str(&bundle.api_doc);
    for hint in &bundle.hints {
        out.push_str("\n\n");
        out.push_str(hint.text());
    }
    if !bundle.examples.is_empty() {
        out.push_str("\n\nExamples:\n");
        for example in &bundle.examples {
            out.push('\n');
            out.push_str(example);
            out.push('\n');
        }
    }
    out
}

/// MoveScript reference documentation, rendered from the grammar and the
/// executor defaults.
pub fn api_doc() -> String {
    let spec = StiffnessSpec::benchmark_default();
    let exec = ExecConfig::default();
    let stiffness: Vec<String> = spec
        .max_cartesian_stiffness
        .iter()
        .map(|v| format!("{v}"))
        .collect();
    let inertia: Vec<String> = spec
        .virtual_cartesian_inertia
        .iter()
        .map(|v| format!("{v}"))
        .collect();
    let mut doc = String::new();
    write!(
        doc,
        "Write a MoveScript program. Every statement ends with `;`; lines starting \
         with `#` are comments. There are no loops, branches, or function definitions.\n\
         \n\
         Statements:\n\
         - move_compliant(pose_expr, key = value, ...): compliant move toward a target \
         pose until a termination condition is reached. Keyword arguments:\n\
         - stiffness = [x, y, z, rx, ry, rz]: maximum Cartesian stiffness per axis \
         (N/m and N*m/rad). Default [{}].\n\
         - impedance = [..]: six values in (0, 1] scaling the stiffness. Default all 1.\n\
         - inertia = [..]: virtual inertia per axis (kg, kg*m^2). Default [{}].\n\
         - until = condition: termination condition (see below). Without one the move \
         runs its full timeout.\n\
         - timeout = seconds: execution timeout. Default value: {}.\n\
         - tare = true|false: re-zero the force sensor at move start. Use false when \
         starting in contact, true otherwise. Default true.\n\
         - move_ptp(pose_expr): stiff point-to-point move; faults if contact forces \
         exceed {} N.\n\
         - move_gripper(percent): 0 is fully closed, 100 is fully open.\n\
         - grasp_cable(): grab the free edge of the routed cable.\n\
         - pick_up(object): grasp the named object.\n\
         - estimate_pose(object, name): detect the object and bind its estimated pose \
         to `name`.\n\
         - let name = pose_expr: bind a pose expression to a name.\n\
         \n\
         Pose expressions:\n\
         - pose(number): the annotated reference pose for this task.\n\
         - pose_rpy([x, y, z], [roll, pitch, yaw]): translation in meters, rotation in \
         radians.\n\
         - a * b: apply b on top of a, e.g. pose(1) * pose_rpy([0, 0, -0.01], [0, 0, 0]).\n\
         \n\
         Conditions compare a state variable with a threshold:\n\
         - variables: x_force, y_force, z_force (newtons, what the environment exerts \
         on the tool), translation_error (m), rotation_error (rad).\n\
         - comparators: >= | <= | ~= (approximately equal) | !~= .\n\
         - any(c1, c2, ...) and all(c1, c2, ...) compose conditions.\n\
         - force thresholds should stay within [-{}, {}]; values outside [-{}, {}] are \
         rejected.\n",
        stiffness.join(", "),
        inertia.join(", "),
        exec.default_timeout_s,
        exec.ptp_fault_force,
        STRICT_FORCE_LIMIT,
        STRICT_FORCE_LIMIT,
        DEFAULT_FORCE_LIMIT,
        DEFAULT_FORCE_LIMIT,
    )
    .unwrap();
    doc
}

fn task_description(kind: TaskKind) -> String {
    match kind {
        TaskKind::FmbInsertion { shape } => {
            let shape_text = match shape {
                PegShape::Circle => {
                    "The peg cross-section is circular, so any rotation about z fits."
                }
                PegShape::Star => {
                    "The peg cross-section is a four-pointed star; the hole's rotation \
                     about z is randomized within a quarter turn, so the peg only fits \
                     at the matching rotation (modulo 90 degrees)."
                }
                PegShape::HalfPipe => {
                    "The peg cross-section is a half-pipe with exactly one valid \
                     orientation; the hole's rotation about z is randomized."
                }
            };
            format!(
                "You're a robot inserting a 3D-printed peg into a matching hole in a \
                 board. The peg hangs over the insertion point; pose(1) is the staging \
                 pose above the hole. {shape_text} Grab the peg with pick_up(peg), get \
                 in contact, align, and insert it at least 10 mm deep."
            )
        }
        TaskKind::CableUnroute => "You're a robot whose gripper can grab a cable that runs \
            through a covered channel; the cover has a narrow opening somewhere along its \
            length. pose(1) is the grasp pose inside the channel. Grab the cable with \
            grasp_cable() and pull it up and out of the channel through the opening, using \
            the sensed forces to find the opening."
            .to_string(),
        TaskKind::CableRoute => "You're a robot holding position above a covered cable \
            channel; the cover has a narrow opening somewhere along its length. pose(1) is \
            the grasp pose above the channel. Grab the cable with grasp_cable() and thread \
            it down through the opening so it sits inside the channel under the cover, \
            using the sensed forces to find the opening."
            .to_string(),
        TaskKind::ConnectorInsertion { use_perception } => {
            let noise = if use_perception {
                "The socket pose comes from a vision estimate and can be off by a few \
                 millimeters."
            } else {
                "The socket pose estimate is accurate."
            };
            format!(
                "You're a robot inserting a waterproof connector plug into its socket on \
                 an assembly board. {noise} Grab the plug with pick_up(plug), call \
                 estimate_pose(socket, name) for the socket pose, then insert the plug at \
                 least 10 mm deep, searching for the opening if needed."
            )
        }
    }
}

fn environment_examples(kind: TaskKind) -> Vec<String> {
    match kind {
        TaskKind::FmbInsertion { .. } => vec![
            "# move down until contact is reached\n\
             move_compliant(pose(1) * pose_rpy([0, 0, -0.02], [0, 0, 0]), until = any(z_force >= 0.4, translation_error <= 0.001));"
                .to_string(),
        ],
        // the industrial-board environment ships three subcommand examples:
        // down until contact, up until a snag, right until a snag
        TaskKind::CableUnroute
        | TaskKind::CableRoute
        | TaskKind::ConnectorInsertion { .. } => vec![
            "# move down until contact is reached\n\
             move_compliant(pose(1) * pose_rpy([0, 0, -0.01], [0, 0, 0]), until = any(z_force >= 0.4, translation_error <= 0.001));"
                .to_string(),
            "# move up unless a snag is detected\n\
             move_compliant(pose(1) * pose_rpy([0, 0, 0.01], [0, 0, 0]), until = any(z_force <= -0.4, translation_error <= 0.001));"
                .to_string(),
            "# move right unless a snag is detected\n\
             move_compliant(pose(1) * pose_rpy([0.01, 0, 0.01], [0, 0, 0]), until = any(x_force <= -0.4, translation_error <= 0.001), tare = false);"
                .to_string(),
        ],
    }
}

/// The bundle the benchmark uses for a task: fixed hints, per-environment
/// examples when few-shot, and the task's description.
pub fn bundle_for_task(kind: TaskKind, shots: Shots) -> PromptBundle {
    PromptBundle {
        task_description: task_description(kind),
        api_doc: api_doc(),
        hints: BTreeSet::from(Hint::ALL),
        examples: match shots {
            Shots::Zero => Vec::new(),
            Shots::Few => environment_examples(kind),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn few_shot_rgmc_has_three_examples() {
        let bundle = bundle_for_task(TaskKind::CableUnroute, Shots::Few);
        assert_eq!(bundle.examples.len(), 3);
    }

    #[test]
    fn zero_shot_has_no_examples_section() {
        let bundle = bundle_for_task(TaskKind::CableUnroute, Shots::Zero);
        let text = assemble_prompt(&bundle);
        assert!(!text.contains("Examples:"));
    }

    #[test]
    fn assembly_is_deterministic() {
        let a = assemble_prompt(&bundle_for_task(TaskKind::CableUnroute, Shots::Few));
        let b = assemble_prompt(&bundle_for_task(TaskKind::CableUnroute, Shots::Few));
        assert_eq!(a, b);
    }

    #[test]
    fn adding_an_example_only_appends() {
        let mut bundle = bundle_for_task(TaskKind::CableUnroute, Shots::Few);
        let before = assemble_prompt(&bundle);
        bundle.examples.push("# extra\nmove_gripper(100);".to_string());
        let after = assemble_prompt(&bundle);
        assert!(after.starts_with(&before));
        assert!(after.len() > before.len());
    }

    #[test]
    fn api_doc_identical_across_tasks() {
        let a = bundle_for_task(TaskKind::CableUnroute, Shots::Zero).api_doc;
        let b = bundle_for_task(
            TaskKind::FmbInsertion {
                shape: PegShape::Star,
            },
            Shots::Zero,
        )
        .api_doc;
        assert_eq!(a, b);
    }

    #[test]
    fn examples_parse_and_validate() {
        for kind in [
            TaskKind::CableUnroute,
            TaskKind::FmbInsertion {
                shape: PegShape::Circle,
            },
        ] {
            for example in environment_examples(kind) {
                let program = crate::script::parse(&example).expect("example must parse");
                assert!(crate::script::validate(&program, false).is_empty());
            }
        }
    }
}
