//! The mutable simulation state for one rollout: a controllable flange, the
//! task fixture with its randomized draws, grasp bookkeeping, a tareable
//! force-torque reading, and the robot affordances the policies call.

use super::contact::{self, LipZone};
use super::{CableStart, PegShape, SimError, StartSide, TaskKind, TaskSpec};
use crate::control::{ControlWorld, ControllerState, Wrench};
use crate::pose::{normalize_angle, pose_rpy, Pose};
use nalgebra::Vector3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Fixture state instantiated from the task's randomization draws.
#[derive(Debug, Clone, PartialEq)]
enum Fixture {
    /// Peg-in-hole: bore centered at the origin, surface plane z = 0.
    Hole { bore_yaw: f64, in_bore: bool },
    /// Cable channel in the xz plane.
    Channel { start: StartSide, zone: LipZone },
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub spec: TaskSpec,
    pub flange: ControllerState,
    pub grasped: Option<String>,
    pub ft_bias: Wrench,
    pub rng_seed: u64,
    pub clock: f64,
    fixture: Fixture,
    objects: HashMap<String, Pose>,
    estimates: HashMap<String, Pose>,
    named_poses: HashMap<u32, Pose>,
}

/// Instantiate a world from a task spec and a seed. All randomization is
/// drawn here; the subsequent evolution is a pure function of the command
/// sequence.
pub fn spawn_task(spec: &TaskSpec, seed: u64) -> World {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut objects = HashMap::new();
    let mut estimates = HashMap::new();
    let mut named_poses = HashMap::new();

    let (fixture, start_pose) = match spec.kind {
        TaskKind::FmbInsertion { shape } => {
            let bore_yaw = match shape {
                PegShape::Circle => 0.0,
                PegShape::Star => rng.gen_range(0.0..std::f64::consts::FRAC_PI_2),
                PegShape::HalfPipe => {
                    if rng.gen_range(0..2) == 0 {
                        0.0
                    } else {
                        std::f64::consts::PI
                    }
                }
            };
            let hover = pose_rpy([0.0, 0.0, spec.hole.hover_height], [0.0, 0.0, 0.0]).unwrap();
            objects.insert("peg".to_string(), hover);
            estimates.insert("peg".to_string(), hover);
            named_poses.insert(1, hover);
            (
                Fixture::Hole {
                    bore_yaw,
                    in_bore: false,
                },
                hover,
            )
        }
        TaskKind::ConnectorInsertion { use_perception } => {
            let offset = if use_perception {
                let r = spec.perception.max_offset * rng.gen_range(0.0f64..1.0).sqrt();
                let theta = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                Vector3::new(r * theta.cos(), r * theta.sin(), 0.0)
            } else {
                Vector3::zeros()
            };
            let socket = Pose::identity();
            let mut socket_estimate = socket;
            socket_estimate.translation += offset;
            let staging =
                pose_rpy([0.0, 0.0, spec.hole.hover_height + 0.015], [0.0, 0.0, 0.0]).unwrap();
            objects.insert("plug".to_string(), staging);
            objects.insert("socket".to_string(), socket);
            estimates.insert("plug".to_string(), staging);
            estimates.insert("socket".to_string(), socket_estimate);
            named_poses.insert(1, staging);
            (
                Fixture::Hole {
                    bore_yaw: 0.0,
                    in_bore: false,
                },
                staging,
            )
        }
        TaskKind::CableUnroute | TaskKind::CableRoute => {
            let start = match spec.cable_start {
                CableStart::Forced(side) => side,
                CableStart::Seeded => {
                    if rng.gen_range(0..2) == 0 {
                        StartSide::Left
                    } else {
                        StartSide::Right
                    }
                }
            };
            let x = match start {
                StartSide::Left => -spec.channel.start_offset,
                StartSide::Right => spec.channel.start_offset,
            };
            let (z, zone) = if spec.kind == TaskKind::CableUnroute {
                (spec.channel.unroute_grasp_z, LipZone::Below)
            } else {
                (spec.channel.route_start_z, LipZone::Above)
            };
            let grasp = pose_rpy([x, 0.0, z], [0.0, 0.0, 0.0]).unwrap();
            objects.insert("cable".to_string(), grasp);
            estimates.insert("cable".to_string(), grasp);
            named_poses.insert(1, grasp);
            (Fixture::Channel { start, zone }, grasp)
        }
    };

    World {
        spec: spec.clone(),
        flange: ControllerState::at_rest(start_pose),
        grasped: None,
        ft_bias: Wrench::zeros(),
        rng_seed: seed,
        clock: 0.0,
        fixture,
        objects,
        estimates,
        named_poses,
    }
}

impl World {
    /// Pose of an object: tracks the flange while grasped, frozen otherwise.
    pub fn object_pose(&self, id: &str) -> Option<Pose> {
        if self.grasped.as_deref() == Some(id) {
            return Some(self.flange.x);
        }
        self.objects.get(id).copied()
    }

    pub fn tool_grasped(&self) -> bool {
        self.grasped.as_deref() == Some(self.spec.kind.tool_object())
    }

    pub fn start_side(&self) -> Option<StartSide> {
        match &self.fixture {
            Fixture::Channel { start, .. } => Some(*start),
            _ => None,
        }
    }

    pub fn bore_yaw(&self) -> Option<f64> {
        match &self.fixture {
            Fixture::Hole { bore_yaw, .. } => Some(*bore_yaw),
            _ => None,
        }
    }

    /// Attach a graspable object to the flange.
    pub fn pick_up(&mut self, id: &str) -> Result<(), SimError> {
        if let Some(held) = &self.grasped {
            return Err(SimError::GripperOccupied(held.clone()));
        }
        if !self.objects.contains_key(id) {
            return Err(SimError::NoSuchObject(id.to_string()));
        }
        if id != self.spec.kind.tool_object() || self.spec.kind.is_cable() {
            return Err(SimError::NoSuchObject(format!("{id} is not graspable")));
        }
        self.grasped = Some(id.to_string());
        Ok(())
    }

    /// Bind the flange to the cable grasp point at the randomized start.
    pub fn grasp_cable(&mut self) -> Result<(), SimError> {
        if let Some(held) = &self.grasped {
            return Err(SimError::GripperOccupied(held.clone()));
        }
        if !self.objects.contains_key("cable") {
            return Err(SimError::NoSuchObject("cable".to_string()));
        }
        self.grasped = Some("cable".to_string());
        Ok(())
    }

    /// 0 is fully closed, 100 is fully open; opening fully releases whatever
    /// is grasped at its current pose.
    pub fn move_gripper(&mut self, percent_open: f64) -> Result<(), SimError> {
        if !(0.0..=100.0).contains(&percent_open) || !percent_open.is_finite() {
            return Err(SimError::InvalidArgument(format!(
                "percent_open {percent_open} outside 0..=100"
            )));
        }
        if percent_open >= 100.0 {
            if let Some(id) = self.grasped.take() {
                self.objects.insert(id, self.flange.x);
            }
        }
        Ok(())
    }

    /// Perception oracle: the true pose perturbed by the task's noise model,
    /// drawn once at spawn so repeated calls agree.
    pub fn estimate_and_update_pose(&mut self, id: &str) -> Result<Pose, SimError> {
        self.estimates
            .get(id)
            .copied()
            .ok_or_else(|| SimError::NoSuchObject(id.to_string()))
    }

    /// Task-annotated reference pose.
    pub fn named_pose(&self, index: u32) -> Result<Pose, SimError> {
        self.named_poses
            .get(&index)
            .copied()
            .ok_or(SimError::NoSuchPose(index))
    }

    fn insertion_state(&self) -> Option<(f64, f64, f64)> {
        // (depth, lateral offset, rotation error) of the task object
        let pose = self.object_pose(self.spec.kind.tool_object())?;
        let depth = -pose.translation.z;
        let lateral = (pose.translation.x.powi(2) + pose.translation.y.powi(2)).sqrt();
        let bore_yaw = self.bore_yaw()?;
        let rot_err = self.spec.symmetry().rotation_error(pose.rotation.z, bore_yaw);
        Some((depth, lateral, rot_err))
    }

    /// Task success predicate, evaluated on the current state.
    pub fn check_success(&self) -> bool {
        match self.spec.kind {
            TaskKind::FmbInsertion { .. } | TaskKind::ConnectorInsertion { .. } => {
                match self.insertion_state() {
                    Some((depth, lateral, rot_err)) => {
                        depth >= self.spec.hole.required_depth
                            && lateral <= self.spec.hole.clearance + self.spec.hole.lateral_slack
                            && (self.spec.symmetry().period == 0.0
                                || rot_err <= self.spec.hole.alignment_tolerance)
                    }
                    None => false,
                }
            }
            TaskKind::CableUnroute => match self.object_pose("cable") {
                Some(p) => p.translation.z >= self.spec.channel.free_z,
                None => false,
            },
            TaskKind::CableRoute => match self.object_pose("cable") {
                Some(p) => {
                    p.translation.z < self.spec.channel.lip_bottom_z
                        && p.translation.x.abs() < self.spec.channel.half_width
                }
                None => false,
            },
        }
    }
}

impl ControlWorld for World {
    fn flange(&self) -> ControllerState {
        self.flange
    }

    fn set_flange(&mut self, state: ControllerState) {
        self.flange = state;
    }

    fn contact_wrench(&self) -> Wrench {
        if !self.tool_grasped() {
            return Wrench::zeros();
        }
        match &self.fixture {
            Fixture::Hole { bore_yaw, in_bore } => contact::hole_reaction(
                &self.spec.hole,
                &self.spec.symmetry(),
                *bore_yaw,
                *in_bore,
                &self.flange,
            ),
            Fixture::Channel { zone, .. } => {
                contact::channel_reaction(&self.spec.channel, *zone, &self.flange)
            }
        }
    }

    fn ft_bias(&self) -> Wrench {
        self.ft_bias
    }

    fn set_ft_bias(&mut self, bias: Wrench) {
        self.ft_bias = bias;
    }

    fn after_motion(&mut self, dt: f64) {
        self.clock += dt;
        if !self.tool_grasped() {
            return;
        }
        let p = self.flange.x.translation;
        let symmetry = self.spec.symmetry();
        match &mut self.fixture {
            Fixture::Hole { bore_yaw, in_bore } => {
                if *in_bore {
                    if p.z >= 0.0 {
                        *in_bore = false;
                    } else if symmetry.period > 0.0 && -p.z > 5e-4 {
                        // a keyed cross-section cannot rotate inside the bore:
                        // clamp yaw to the branch it entered on, pinned just
                        // inside the play so the peg stays insertable
                        let yaw = self.flange.x.rotation.z;
                        let err = yaw - *bore_yaw;
                        let folded = err - symmetry.period * (err / symmetry.period).round();
                        if folded.abs() > 0.95 * symmetry.alignment_tolerance {
                            let clamped = yaw - folded
                                + folded.signum() * 0.95 * symmetry.alignment_tolerance;
                            self.flange.x.rotation.z = normalize_angle(clamped);
                            self.flange.x_dot[5] = 0.0;
                        }
                    }
                } else {
                    let lateral = (p.x * p.x + p.y * p.y).sqrt();
                    if p.z < 0.0
                        && lateral <= self.spec.hole.clearance
                        && symmetry.aligned(self.flange.x.rotation.z, *bore_yaw)
                    {
                        *in_bore = true;
                    }
                }
            }
            Fixture::Channel { zone, .. } => {
                *zone = contact::next_zone(&self.spec.channel, *zone, p.x, p.z);
            }
        }
    }
}
