//! Move executors: the fixed-rate control loop binding the admittance step to
//! a contact world, with condition-driven termination, timeouts, and the
//! fault behavior of stiff point-to-point tracking.

use super::{
    admittance_step, evaluate_condition, synthesize_gains, ControllerState, ControllerStatus,
    GainSet, MoveCommand, MoveOutcome, MoveStatus, VelocityLimit, Wrench,
};
use crate::pose::Pose;
use serde::{Deserialize, Serialize};

/// What the executors need from an environment: a controllable flange, the
/// raw reaction wrench at the current state, a force-torque bias slot, and a
/// post-step hook for world bookkeeping (clock, contact flags, constraints).
pub trait ControlWorld {
    fn flange(&self) -> ControllerState;
    fn set_flange(&mut self, state: ControllerState);
    /// Reaction wrench the environment currently applies to the tool,
    /// untared.
    fn contact_wrench(&self) -> Wrench;
    fn ft_bias(&self) -> Wrench;
    fn set_ft_bias(&mut self, bias: Wrench);
    fn after_motion(&mut self, dt: f64);
}

/// Fixed executor parameters. The defaults realize the benchmark controller:
/// 1 kHz loop, one trace sample per 10 steps, stiff point-to-point gains with
/// a 30 N fault limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExecConfig {
    pub dt_s: f64,
    pub trace_every: usize,
    pub eps_approx: f64,
    pub default_timeout_s: f64,
    pub max_linear_speed: f64,
    pub max_angular_speed: f64,
    pub ptp_stiffness: f64,
    pub ptp_rot_stiffness: f64,
    pub ptp_inertia: f64,
    pub ptp_rot_inertia: f64,
    pub ptp_fault_force: f64,
    pub ptp_tolerance: f64,
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig {
            dt_s: 1e-3,
            trace_every: 10,
            eps_approx: 0.05,
            default_timeout_s: 10.0,
            max_linear_speed: 0.25,
            max_angular_speed: 1.5,
            ptp_stiffness: 2e4,
            ptp_rot_stiffness: 2e3,
            ptp_inertia: 1.0,
            ptp_rot_inertia: 0.1,
            ptp_fault_force: 30.0,
            ptp_tolerance: 5e-4,
        }
    }
}

impl ExecConfig {
    pub fn velocity_limit(&self) -> VelocityLimit {
        VelocityLimit {
            linear: self.max_linear_speed,
            angular: self.max_angular_speed,
        }
    }

    fn ptp_gains(&self) -> GainSet {
        let mut k_p = nalgebra::Vector6::zeros();
        let mut m = nalgebra::Vector6::zeros();
        for i in 0..3 {
            k_p[i] = self.ptp_stiffness;
            k_p[i + 3] = self.ptp_rot_stiffness;
            m[i] = self.ptp_inertia;
            m[i + 3] = self.ptp_rot_inertia;
        }
        let k_d = k_p.component_mul(&m).map(|v| 2.0 * v.sqrt());
        GainSet { k_p, k_d, m }
    }
}

/// Record the current raw wrench as the sensor bias; subsequent readings
/// subtract it. Taring twice replaces the bias.
pub fn tare_sensor<W: ControlWorld>(world: &mut W) {
    let raw = world.contact_wrench();
    world.set_ft_bias(raw);
}

/// Run a compliant move until its termination condition fires or the timeout
/// elapses. Never faults: compliance bounds the contact force.
pub fn execute_compliant_move<W: ControlWorld>(
    world: &mut W,
    cmd: &MoveCommand,
    cfg: &ExecConfig,
) -> MoveOutcome {
    let gains = synthesize_gains(&cmd.stiffness).expect("move command carries a valid spec");
    assert!(cmd.timeout_s > 0.0, "timeout must be positive");
    if cmd.tare_ft_sensor {
        tare_sensor(world);
    }
    run_loop(world, cfg, &gains, cmd.target, cmd.timeout_s, |status, step| {
        if let Some(cond) = &cmd.termination {
            if evaluate_condition(cond, status, cfg.eps_approx) {
                return Some(MoveStatus::Terminated);
            }
        }
        let _ = step;
        None
    })
}

/// Stiff position tracking toward a target. Faults immediately once the raw
/// contact force magnitude exceeds the fault limit; terminates once the
/// translation error drops below the point-to-point tolerance.
pub fn execute_ptp_move<W: ControlWorld>(
    world: &mut W,
    target: Pose,
    cfg: &ExecConfig,
) -> MoveOutcome {
    let gains = cfg.ptp_gains();
    let fault = cfg.ptp_fault_force;
    let tolerance = cfg.ptp_tolerance;
    run_loop(
        world,
        cfg,
        &gains,
        target,
        cfg.default_timeout_s,
        move |status, raw_force| {
            // faults trip on the raw force: hardware limits ignore software taring
            if raw_force > fault {
                Some(MoveStatus::Faulted)
            } else if status.translation_error <= tolerance {
                Some(MoveStatus::Terminated)
            } else {
                None
            }
        },
    )
}

fn run_loop<W, F>(
    world: &mut W,
    cfg: &ExecConfig,
    gains: &GainSet,
    target: Pose,
    timeout_s: f64,
    mut verdict: F,
) -> MoveOutcome
where
    W: ControlWorld,
    F: FnMut(&ControllerStatus, f64) -> Option<MoveStatus>,
{
    let mut state = world.flange();
    state.x_target = target;
    state.x_dot_target = nalgebra::Vector6::zeros();
    world.set_flange(state);

    let mut trace = Vec::new();
    let mut step = 0usize;
    loop {
        let elapsed = step as f64 * cfg.dt_s;
        let raw = world.contact_wrench();
        let tared = raw - world.ft_bias();
        let state = world.flange();
        let status = ControllerStatus::sample(&state, &tared);
        if step.is_multiple_of(cfg.trace_every) {
            trace.push(status);
        }
        let raw_force = raw.fixed_rows::<3>(0).norm();
        if let Some(outcome) = verdict(&status, raw_force) {
            push_final(&mut trace, status);
            return MoveOutcome {
                status: outcome,
                final_status: status,
                elapsed_s: elapsed,
                trace,
            };
        }
        if elapsed >= timeout_s {
            push_final(&mut trace, status);
            return MoveOutcome {
                status: MoveStatus::TimedOut,
                final_status: status,
                elapsed_s: elapsed,
                trace,
            };
        }
        let sensed = -tared;
        let next = admittance_step(
            &state,
            gains,
            &sensed,
            &Wrench::zeros(),
            cfg.dt_s,
            &cfg.velocity_limit(),
        );
        world.set_flange(next);
        world.after_motion(cfg.dt_s);
        step += 1;
    }
}

fn push_final(trace: &mut Vec<ControllerStatus>, status: ControllerStatus) {
    if trace.last() != Some(&status) {
        trace.push(status);
    }
}
