//! Variable-compliance control: gain synthesis from a stiffness spec, the
//! admittance integration step, and the move executors built on them.
//!
//! The controller renders a decoupled spring-damper-mass per Cartesian axis:
//!
//! ```text
//! a = M^-1 (Kp (x_target - x) + Kd (xd_target - xd) + (f_desired - f_sensed))
//! ```
//!
//! `f_sensed` is the wrench the tool applies to the environment. The status
//! forces exposed to termination conditions are the opposite sign: the tared
//! reaction the environment applies to the tool, so that pressing down onto a
//! surface reads as positive z_force.

mod condition;
mod executor;

pub use condition::{evaluate_condition, CompareOp, ConditionExpr, ConjunctionOp, StatusVar};
pub use executor::{
    execute_compliant_move, execute_ptp_move, tare_sensor, ControlWorld, ExecConfig,
};

use crate::pose::{normalize_angle, pose_error, Pose};
use nalgebra::{Vector3, Vector6};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Force (xyz) and torque (xyz) stacked, robot base frame.
pub type Wrench = Vector6<f64>;

#[derive(Debug, Error, PartialEq)]
pub enum ControlError {
    #[error("invalid stiffness spec: {0}")]
    InvalidSpec(String),
}

/// The three 6-vectors the compliant move API exposes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StiffnessSpec {
    /// Maximum stiffness per Cartesian dof: N/m translation, N·m/rad rotation.
    pub max_cartesian_stiffness: Vector6<f64>,
    /// (0, 1] scale applied to the maximum stiffness per dof.
    pub target_impedance: Vector6<f64>,
    /// Diagonal virtual inertia, kg and kg·m².
    pub virtual_cartesian_inertia: Vector6<f64>,
}

impl StiffnessSpec {
    pub fn new(stiffness: [f64; 6], impedance: [f64; 6], inertia: [f64; 6]) -> Self {
        StiffnessSpec {
            max_cartesian_stiffness: Vector6::from_column_slice(&stiffness),
            target_impedance: Vector6::from_column_slice(&impedance),
            virtual_cartesian_inertia: Vector6::from_column_slice(&inertia),
        }
    }

    /// The fixed parameter set a move runs with when the policy omits
    /// stiffness, impedance, and inertia.
    pub fn benchmark_default() -> Self {
        StiffnessSpec::new(
            [400.0, 400.0, 400.0, 40.0, 40.0, 40.0],
            [1.0; 6],
            [1.0, 1.0, 1.0, 0.1, 0.1, 0.1],
        )
    }

    pub fn validate(&self) -> Result<(), ControlError> {
        for i in 0..6 {
            let k = self.max_cartesian_stiffness[i];
            let s = self.target_impedance[i];
            let m = self.virtual_cartesian_inertia[i];
            if !(k.is_finite() && k > 0.0) {
                return Err(ControlError::InvalidSpec(format!("stiffness[{i}] = {k}")));
            }
            if !(s.is_finite() && s > 0.0 && s <= 1.0) {
                return Err(ControlError::InvalidSpec(format!(
                    "impedance[{i}] = {s}, must lie in (0, 1]"
                )));
            }
            if !(m.is_finite() && m > 0.0) {
                return Err(ControlError::InvalidSpec(format!("inertia[{i}] = {m}")));
            }
        }
        Ok(())
    }
}

/// Per-axis gains realizing the spec. Kd is critically damped against Kp and M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainSet {
    pub k_p: Vector6<f64>,
    pub k_d: Vector6<f64>,
    pub m: Vector6<f64>,
}

/// Kp = impedance ⊙ max_stiffness, M = virtual inertia, Kd = 2·sqrt(Kp·M).
pub fn synthesize_gains(spec: &StiffnessSpec) -> Result<GainSet, ControlError> {
    spec.validate()?;
    let k_p = spec
        .target_impedance
        .component_mul(&spec.max_cartesian_stiffness);
    let m = spec.virtual_cartesian_inertia;
    let k_d = k_p.component_mul(&m).map(|v| 2.0 * v.sqrt());
    Ok(GainSet { k_p, k_d, m })
}

/// Controller state advanced by [`admittance_step`]. Target acceleration is
/// implicitly zero: every policy commands static waypoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerState {
    pub x: Pose,
    /// Linear (m/s) then angular (rad/s) velocity.
    pub x_dot: Vector6<f64>,
    pub x_target: Pose,
    pub x_dot_target: Vector6<f64>,
}

impl ControllerState {
    pub fn at_rest(pose: Pose) -> Self {
        ControllerState {
            x: pose,
            x_dot: Vector6::zeros(),
            x_target: pose,
            x_dot_target: Vector6::zeros(),
        }
    }
}

/// The five state variables termination conditions may reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerStatus {
    pub x_force: f64,
    pub y_force: f64,
    pub z_force: f64,
    pub translation_error: f64,
    pub rotation_error: f64,
}

impl ControllerStatus {
    pub fn sample(state: &ControllerState, tared_reaction: &Wrench) -> Self {
        let err = pose_error(&state.x, &state.x_target);
        ControllerStatus {
            x_force: tared_reaction[0],
            y_force: tared_reaction[1],
            z_force: tared_reaction[2],
            translation_error: err.translation_error,
            rotation_error: err.rotation_error,
        }
    }

    pub fn get(&self, var: StatusVar) -> f64 {
        match var {
            StatusVar::XForce => self.x_force,
            StatusVar::YForce => self.y_force,
            StatusVar::ZForce => self.z_force,
            StatusVar::TranslationError => self.translation_error,
            StatusVar::RotationError => self.rotation_error,
        }
    }
}

/// Velocity saturation applied after each integration step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocityLimit {
    pub linear: f64,
    pub angular: f64,
}

impl Default for VelocityLimit {
    fn default() -> Self {
        VelocityLimit {
            linear: 0.25,
            angular: 1.5,
        }
    }
}

/// One semi-implicit Euler step of the admittance law.
///
/// `sensed` is the wrench the tool currently applies on the environment;
/// `desired` is the commanded interaction wrench (zero for plain moves).
/// Per-axis decoupled; rotational axes integrate on the RPY components.
pub fn admittance_step(
    state: &ControllerState,
    gains: &GainSet,
    sensed: &Wrench,
    desired: &Wrench,
    dt: f64,
    limit: &VelocityLimit,
) -> ControllerState {
    debug_assert!(dt > 0.0 && dt <= 0.01, "dt must lie in (0, 0.01]");
    let mut error = Vector6::zeros();
    for i in 0..3 {
        error[i] = state.x_target.translation[i] - state.x.translation[i];
        error[i + 3] = normalize_angle(state.x_target.rotation[i] - state.x.rotation[i]);
    }
    let error_rate = state.x_dot_target - state.x_dot;
    let force = desired - sensed;

    let mut velocity = state.x_dot;
    for i in 0..6 {
        let accel =
            (gains.k_p[i] * error[i] + gains.k_d[i] * error_rate[i] + force[i]) / gains.m[i];
        velocity[i] += accel * dt;
    }
    saturate(&mut velocity, limit);

    let mut pose = state.x;
    for i in 0..3 {
        pose.translation[i] += velocity[i] * dt;
        pose.rotation[i] = normalize_angle(pose.rotation[i] + velocity[i + 3] * dt);
    }
    ControllerState {
        x: pose,
        x_dot: velocity,
        ..*state
    }
}

fn saturate(velocity: &mut Vector6<f64>, limit: &VelocityLimit) {
    let linear: Vector3<f64> = velocity.fixed_rows::<3>(0).into();
    let angular: Vector3<f64> = velocity.fixed_rows::<3>(3).into();
    if linear.norm() > limit.linear {
        let scaled = linear * (limit.linear / linear.norm());
        velocity.fixed_rows_mut::<3>(0).copy_from(&scaled);
    }
    if angular.norm() > limit.angular {
        let scaled = angular * (limit.angular / angular.norm());
        velocity.fixed_rows_mut::<3>(3).copy_from(&scaled);
    }
}

/// A single compliant move request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveCommand {
    pub target: Pose,
    pub stiffness: StiffnessSpec,
    pub termination: Option<ConditionExpr>,
    pub timeout_s: f64,
    pub tare_ft_sensor: bool,
}

impl MoveCommand {
    pub fn to_pose(target: Pose) -> Self {
        MoveCommand {
            target,
            stiffness: StiffnessSpec::benchmark_default(),
            termination: None,
            timeout_s: 10.0,
            tare_ft_sensor: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveStatus {
    /// The termination condition evaluated true.
    Terminated,
    /// The timeout elapsed before any condition fired.
    TimedOut,
    /// Contact force exceeded the fault limit (point-to-point moves only).
    Faulted,
}

/// What a move executor hands back: status, the final sample, and a decimated
/// status trace (one sample per `trace_every` control steps plus the final one).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveOutcome {
    pub status: MoveStatus,
    pub final_status: ControllerStatus,
    pub elapsed_s: f64,
    pub trace: Vec<ControllerStatus>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pose::pose_rpy;
    use approx::assert_relative_eq;

    fn uniform_spec(stiffness: f64, impedance: f64, inertia: f64) -> StiffnessSpec {
        StiffnessSpec::new([stiffness; 6], [impedance; 6], [inertia; 6])
    }

    #[test]
    fn gains_full_impedance() {
        let g = synthesize_gains(&uniform_spec(400.0, 1.0, 1.0)).unwrap();
        assert_relative_eq!(g.k_p[0], 400.0);
        assert_relative_eq!(g.k_d[0], 40.0);
        assert_relative_eq!(g.m[0], 1.0);
    }

    #[test]
    fn gains_half_impedance() {
        let g = synthesize_gains(&uniform_spec(400.0, 0.5, 1.0)).unwrap();
        assert_relative_eq!(g.k_p[0], 200.0);
        assert_relative_eq!(g.k_d[0], 2.0 * 200.0f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn gains_reject_zero_impedance() {
        assert!(matches!(
            synthesize_gains(&uniform_spec(400.0, 0.0, 1.0)),
            Err(ControlError::InvalidSpec(_))
        ));
    }

    #[test]
    fn gains_reject_above_one_impedance() {
        assert!(synthesize_gains(&uniform_spec(400.0, 1.1, 1.0)).is_err());
    }

    #[test]
    fn step_at_equilibrium_is_identity() {
        let state = ControllerState::at_rest(Pose::identity());
        let gains = synthesize_gains(&uniform_spec(400.0, 1.0, 1.0)).unwrap();
        let out = admittance_step(
            &state,
            &gains,
            &Wrench::zeros(),
            &Wrench::zeros(),
            1e-3,
            &VelocityLimit::default(),
        );
        assert_eq!(out, state);
    }

    #[test]
    fn step_matches_direct_formula() {
        // 10 mm z error, at rest: a = 400*0.01 = 4 m/s^2, v' = 4e-3, dz = 4e-6
        let mut state = ControllerState::at_rest(Pose::identity());
        state.x_target = pose_rpy([0.0, 0.0, 0.01], [0.0, 0.0, 0.0]).unwrap();
        let gains = synthesize_gains(&uniform_spec(400.0, 1.0, 1.0)).unwrap();
        let out = admittance_step(
            &state,
            &gains,
            &Wrench::zeros(),
            &Wrench::zeros(),
            1e-3,
            &VelocityLimit::default(),
        );
        assert_relative_eq!(out.x_dot[2], 0.004, max_relative = 1e-12);
        assert_relative_eq!(out.x.translation.z, 4e-6, max_relative = 1e-12);
    }

    #[test]
    fn velocity_saturates() {
        let mut state = ControllerState::at_rest(Pose::identity());
        state.x_target = pose_rpy([10.0, 0.0, 0.0], [0.0, 0.0, 0.0]).unwrap();
        let gains = synthesize_gains(&uniform_spec(4e5, 1.0, 1.0)).unwrap();
        let mut s = state;
        for _ in 0..100 {
            s = admittance_step(
                &s,
                &gains,
                &Wrench::zeros(),
                &Wrench::zeros(),
                1e-3,
                &VelocityLimit::default(),
            );
        }
        assert!(s.x_dot.fixed_rows::<3>(0).norm() <= 0.25 + 1e-12);
    }

    /// Closed-form static equilibrium against an environment spring:
    /// penetration = Kp·d / (Kp + k_env) for commanded depths up to 10 mm,
    /// cross-checked by integrating 5 s at dt = 1e-4.
    #[test]
    fn press_reaches_static_equilibrium() {
        let k_p = 400.0;
        let k_env = 1e4;
        let c_env = 50.0;
        assert_relative_eq!(
            k_p * 0.005 / (k_p + k_env),
            1.923e-4,
            max_relative = 1e-3
        );
        for depth_cmd in [0.002, 0.005, 0.010] {
            let expected_penetration = k_p * depth_cmd / (k_p + k_env);
            let expected_force = k_env * expected_penetration;
            let gains = synthesize_gains(&uniform_spec(k_p, 1.0, 1.0)).unwrap();
            let mut state = ControllerState::at_rest(Pose::identity());
            state.x_target = pose_rpy([0.0, 0.0, -depth_cmd], [0.0, 0.0, 0.0]).unwrap();
            let dt = 1e-4;
            for _ in 0..50_000 {
                // surface at z = 0: reaction pushes up with k·pen + c·pen_rate
                let pen = (-state.x.translation.z).max(0.0);
                let reaction_z = if pen > 0.0 {
                    (k_env * pen + c_env * -state.x_dot[2]).max(0.0)
                } else {
                    0.0
                };
                let mut sensed = Wrench::zeros();
                sensed[2] = -reaction_z; // tool presses down on the surface
                state = admittance_step(
                    &state,
                    &gains,
                    &sensed,
                    &Wrench::zeros(),
                    dt,
                    &VelocityLimit::default(),
                );
            }
            let penetration = -state.x.translation.z;
            let force = k_env * penetration;
            assert!(
                (penetration - expected_penetration).abs() / expected_penetration < 0.01,
                "d = {depth_cmd}: penetration {penetration} vs closed form {expected_penetration}"
            );
            assert!(
                (force - expected_force).abs() / expected_force < 0.01,
                "d = {depth_cmd}: force {force} vs closed form {expected_force}"
            );
        }
    }

    /// Critically damped free-space response: overshoot below 1 % of the
    /// initial error.
    #[test]
    fn free_space_step_has_no_overshoot() {
        let gains = synthesize_gains(&StiffnessSpec::benchmark_default()).unwrap();
        let mut state = ControllerState::at_rest(Pose::identity());
        let initial = 0.01;
        state.x_target = pose_rpy([0.0, 0.0, -initial], [0.0, 0.0, 0.0]).unwrap();
        let mut max_overshoot: f64 = 0.0;
        for _ in 0..5_000 {
            state = admittance_step(
                &state,
                &gains,
                &Wrench::zeros(),
                &Wrench::zeros(),
                1e-3,
                &VelocityLimit::default(),
            );
            max_overshoot = max_overshoot.max(-initial - state.x.translation.z);
        }
        assert!((state.x.translation.z + initial).abs() < 1e-5, "did not settle");
        assert!(
            max_overshoot < 0.01 * initial,
            "overshoot {max_overshoot} exceeds 1 % of {initial}"
        );
    }
}
