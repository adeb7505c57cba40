//! Desk-scale contact environments for the benchmark tasks: peg-in-hole
//! fixtures over three cross-section symmetries, a cable channel with a
//! lipped opening, and a connector socket with an optionally noisy pose
//! estimate.
//!
//! Everything is a point-tool penalty-contact model in the xz/xy plane:
//! the flange pose is the tool center point of whatever is grasped, and
//! constraint surfaces react with `k_env * penetration + c_env * rate`.

mod config;
mod contact;
mod world;

pub use config::{ChannelGeometry, HoleGeometry, SimConfig};
pub use world::{spawn_task, World};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("gripper already holds {0}")]
    GripperOccupied(String),
    #[error("no such object: {0}")]
    NoSuchObject(String),
    #[error("no such reference pose: {0}")]
    NoSuchPose(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid task spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PegShape {
    Circle,
    Star,
    HalfPipe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaskKind {
    FmbInsertion { shape: PegShape },
    CableUnroute,
    CableRoute,
    ConnectorInsertion { use_perception: bool },
}

impl TaskKind {
    /// The object the task manipulates; contact is computed on it while grasped.
    pub fn tool_object(&self) -> &'static str {
        match self {
            TaskKind::FmbInsertion { .. } => "peg",
            TaskKind::CableUnroute | TaskKind::CableRoute => "cable",
            TaskKind::ConnectorInsertion { .. } => "plug",
        }
    }

    pub fn is_cable(&self) -> bool {
        matches!(self, TaskKind::CableUnroute | TaskKind::CableRoute)
    }
}

/// Rotational symmetry of an insertion cross-section. Period 0 means any
/// rotation fits (circle); the half-pipe has a single valid orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeSymmetry {
    pub period: f64,
    pub alignment_tolerance: f64,
}

impl ShapeSymmetry {
    pub fn for_shape(shape: PegShape, alignment_tolerance: f64) -> Self {
        let period = match shape {
            PegShape::Circle => 0.0,
            PegShape::Star => std::f64::consts::FRAC_PI_2,
            PegShape::HalfPipe => 2.0 * std::f64::consts::PI,
        };
        ShapeSymmetry {
            period,
            alignment_tolerance,
        }
    }

    pub fn rotation_free() -> Self {
        ShapeSymmetry {
            period: 0.0,
            alignment_tolerance: f64::INFINITY,
        }
    }

    /// Distance to the nearest symmetric branch, in [0, period/2].
    pub fn rotation_error(&self, yaw: f64, reference_yaw: f64) -> f64 {
        if self.period == 0.0 {
            return 0.0;
        }
        let e = yaw - reference_yaw;
        (e - self.period * (e / self.period).round()).abs()
    }

    pub fn aligned(&self, yaw: f64, reference_yaw: f64) -> bool {
        self.rotation_error(yaw, reference_yaw) <= self.alignment_tolerance
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let valid_period = self.period == 0.0
            || (self.period - std::f64::consts::FRAC_PI_2).abs() < 1e-12
            || (self.period - 2.0 * std::f64::consts::PI).abs() < 1e-12;
        if !valid_period {
            return Err(SimError::InvalidSpec(format!(
                "symmetry period {} not one of 0, pi/2, 2pi",
                self.period
            )));
        }
        if self.period > 0.0
            && !(self.alignment_tolerance > 0.0
                && self.alignment_tolerance <= self.period / 4.0)
        {
            return Err(SimError::InvalidSpec(format!(
                "alignment tolerance {} outside (0, period/4]",
                self.alignment_tolerance
            )));
        }
        Ok(())
    }
}

/// Bound on the pose-estimate error of the perception oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerceptionNoiseModel {
    pub max_offset: f64,
}

impl Default for PerceptionNoiseModel {
    fn default() -> Self {
        PerceptionNoiseModel { max_offset: 0.004 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StartSide {
    Left,
    Right,
}

/// How the cable start offset is chosen: drawn from the world seed, or forced
/// to one side (the robustness study does the latter).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CableStart {
    Seeded,
    Forced(StartSide),
}

/// A benchmark environment definition: kind, geometry, randomization and
/// success-predicate parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub kind: TaskKind,
    pub hole: HoleGeometry,
    pub channel: ChannelGeometry,
    pub perception: PerceptionNoiseModel,
    pub cable_start: CableStart,
}

impl TaskSpec {
    pub fn new(kind: TaskKind, config: &SimConfig) -> Self {
        TaskSpec {
            kind,
            hole: config.hole,
            channel: config.channel,
            perception: config.perception,
            cable_start: CableStart::Seeded,
        }
    }

    pub fn with_defaults(kind: TaskKind) -> Self {
        TaskSpec::new(kind, &SimConfig::default())
    }

    pub fn symmetry(&self) -> ShapeSymmetry {
        match self.kind {
            TaskKind::FmbInsertion { shape } => {
                ShapeSymmetry::for_shape(shape, self.hole.alignment_tolerance)
            }
            // the waterproof connector is keyed in hardware but modeled
            // rotation-free: its randomization is translational
            TaskKind::ConnectorInsertion { .. } => ShapeSymmetry::rotation_free(),
            _ => ShapeSymmetry::rotation_free(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.hole.validate()?;
        self.channel.validate()?;
        if self.perception.max_offset <= 0.0 {
            return Err(SimError::InvalidSpec("perception max_offset <= 0".into()));
        }
        if let TaskKind::FmbInsertion { shape } = self.kind {
            ShapeSymmetry::for_shape(shape, self.hole.alignment_tolerance).validate()?;
        }
        Ok(())
    }
}

/// Parse a task name as used on the command line and in report files.
pub fn task_kind_from_name(name: &str) -> Option<TaskKind> {
    match name {
        "fmb-circle" => Some(TaskKind::FmbInsertion {
            shape: PegShape::Circle,
        }),
        "fmb-star" => Some(TaskKind::FmbInsertion {
            shape: PegShape::Star,
        }),
        "fmb-halfpipe" => Some(TaskKind::FmbInsertion {
            shape: PegShape::HalfPipe,
        }),
        "rgmc-unroute" => Some(TaskKind::CableUnroute),
        "rgmc-route" => Some(TaskKind::CableRoute),
        "nist-connector" => Some(TaskKind::ConnectorInsertion {
            use_perception: false,
        }),
        "nist-connector-perception" => Some(TaskKind::ConnectorInsertion {
            use_perception: true,
        }),
        _ => None,
    }
}

pub fn task_name(kind: TaskKind) -> &'static str {
    match kind {
        TaskKind::FmbInsertion {
            shape: PegShape::Circle,
        } => "fmb-circle",
        TaskKind::FmbInsertion {
            shape: PegShape::Star,
        } => "fmb-star",
        TaskKind::FmbInsertion {
            shape: PegShape::HalfPipe,
        } => "fmb-halfpipe",
        TaskKind::CableUnroute => "rgmc-unroute",
        TaskKind::CableRoute => "rgmc-route",
        TaskKind::ConnectorInsertion {
            use_perception: false,
        } => "nist-connector",
        TaskKind::ConnectorInsertion {
            use_perception: true,
        } => "nist-connector-perception",
    }
}

pub const ALL_TASK_NAMES: [&str; 7] = [
    "fmb-circle",
    "fmb-star",
    "fmb-halfpipe",
    "rgmc-unroute",
    "rgmc-route",
    "nist-connector",
    "nist-connector-perception",
];
