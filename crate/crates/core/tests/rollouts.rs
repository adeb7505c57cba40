//! End-to-end rollouts of the shipped policies against the task worlds, plus
//! the brute-force geometric sweeps behind the contact model.

use benchtop::control::{execute_compliant_move, ConditionExpr, MoveCommand, StatusVar};
use benchtop::control::{ExecConfig, MoveStatus, StiffnessSpec};
use benchtop::eval::{ptp_rewrite, reference_program};
use benchtop::pose::pose_rpy;
use benchtop::script::{interpret, InterpConfig};
use benchtop::sim::{spawn_task, CableStart, PegShape, StartSide, TaskKind, TaskSpec, World};

fn unroute_spec(side: StartSide) -> TaskSpec {
    let mut spec = TaskSpec::with_defaults(TaskKind::CableUnroute);
    spec.cable_start = CableStart::Forced(side);
    spec
}

/// The generated up / right-until-snag / left-until-free / up strategy
/// unroutes the cable from either start side.
#[test]
fn unroute_reference_succeeds_from_both_sides() {
    let program = reference_program(TaskKind::CableUnroute);
    for side in [StartSide::Left, StartSide::Right] {
        let mut world = spawn_task(&unroute_spec(side), 3);
        let trace = interpret(&program, &mut world, &InterpConfig::default());
        assert!(trace.success, "unroute failed from {side:?}");
        assert!(trace.aborted.is_none());
    }
}

/// The same waypoints in the point-to-point action space drive the cable
/// into the lip and fault.
#[test]
fn unroute_waypoints_fault_as_ptp() {
    let program = ptp_rewrite(&reference_program(TaskKind::CableUnroute));
    for side in [StartSide::Left, StartSide::Right] {
        let mut world = spawn_task(&unroute_spec(side), 3);
        let trace = interpret(&program, &mut world, &InterpConfig::default());
        assert!(trace.faulted(), "ptp rewrite should fault against the lip");
        assert!(!trace.success);
    }
}

#[test]
fn route_reference_threads_the_window() {
    let program = reference_program(TaskKind::CableRoute);
    for seed in 0..6 {
        let mut world = spawn_task(&TaskSpec::with_defaults(TaskKind::CableRoute), seed);
        let trace = interpret(&program, &mut world, &InterpConfig::default());
        assert!(trace.success, "route failed at seed {seed}");
    }
}

/// Insertion gate: sweep 64 rotations, press hard; the peg reaches depth
/// only when the rotation error modulo the symmetry period is within
/// tolerance.
#[test]
fn insertion_gate_rotation_sweep() {
    let spec = TaskSpec::with_defaults(TaskKind::FmbInsertion {
        shape: PegShape::Star,
    });
    let symmetry = spec.symmetry();
    let exec = ExecConfig::default();
    for k in 0..64 {
        let yaw = k as f64 / 64.0 * 2.0 * std::f64::consts::PI;
        let mut world = spawn_task(&spec, 0);
        let bore_yaw = world.bore_yaw().unwrap();
        world.pick_up("peg").unwrap();
        // spawn the press from the rotated staging pose
        let start = world
            .named_pose(1)
            .unwrap()
            .multiply(&pose_rpy([0.0, 0.0, 0.0], [0.0, 0.0, yaw]).unwrap());
        world.flange = benchtop::control::ControllerState::at_rest(start);
        let cmd = MoveCommand {
            target: start
                .multiply(&pose_rpy([0.0, 0.0, -0.025], [0.0, 0.0, 0.0]).unwrap()),
            stiffness: StiffnessSpec::benchmark_default(),
            termination: Some(ConditionExpr::ge(StatusVar::ZForce, 0.4)),
            timeout_s: 2.0,
            tare_ft_sensor: true,
        };
        let out = execute_compliant_move(&mut world, &cmd, &exec);
        assert_eq!(out.status, MoveStatus::Terminated);
        let depth = -world.flange.x.translation.z;
        let aligned = symmetry.aligned(yaw, bore_yaw);
        if aligned {
            assert!(depth > 0.001, "aligned yaw {yaw:.2} stuck at depth {depth:.4}");
        } else {
            assert!(
                depth < 0.001,
                "misaligned yaw {yaw:.2} reached depth {depth:.4}"
            );
        }
    }
}

/// Cable opening: lifting succeeds exactly when the grasp x lies inside the
/// window. Brute-force sweep against the analytic boundaries.
#[test]
fn cable_window_lift_sweep() {
    let spec = TaskSpec::with_defaults(TaskKind::CableUnroute);
    let geo = spec.channel;
    let exec = ExecConfig::default();
    let mut x = -geo.half_width + 0.0005;
    while x < geo.half_width {
        let mut world = spawn_task(&spec, 0);
        world.grasp_cable().unwrap();
        let start = pose_rpy([x, 0.0, geo.unroute_grasp_z], [0.0, 0.0, 0.0]).unwrap();
        world.flange = benchtop::control::ControllerState::at_rest(start);
        let cmd = MoveCommand {
            target: pose_rpy([x, 0.0, geo.unroute_grasp_z + 0.02], [0.0, 0.0, 0.0]).unwrap(),
            stiffness: StiffnessSpec::benchmark_default(),
            termination: Some(ConditionExpr::le(StatusVar::TranslationError, 0.001)),
            timeout_s: 2.0,
            tare_ft_sensor: true,
        };
        execute_compliant_move(&mut world, &cmd, &exec);
        let lifted = world.flange.x.translation.z >= geo.free_z;
        let in_window = x >= geo.window_min_x && x <= geo.window_max_x;
        assert_eq!(
            lifted, in_window,
            "x = {x:.4}: lifted {lifted} but window membership {in_window}"
        );
        x += 0.0013;
    }
}

/// With a static target and zero desired wrench, the flange's kinetic energy
/// is non-increasing once contact transients settle.
#[test]
fn no_energy_injection_after_transients() {
    let spec = TaskSpec::with_defaults(TaskKind::FmbInsertion {
        shape: PegShape::Star,
    });
    // press against the tabletop (star misaligned for most seeds; force a
    // misaligned rotation by picking a seed with an interior draw)
    let mut world = (0..50)
        .map(|s| spawn_task(&spec, s))
        .find(|w| {
            let yaw = w.bore_yaw().unwrap();
            (0.3..1.2).contains(&yaw)
        })
        .expect("interior rotation draw");
    world.pick_up("peg").unwrap();
    let gains = StiffnessSpec::benchmark_default();
    let cmd = MoveCommand {
        target: world
            .named_pose(1)
            .unwrap()
            .multiply(&pose_rpy([0.0, 0.0, -0.02], [0.0, 0.0, 0.0]).unwrap()),
        stiffness: gains,
        termination: None,
        timeout_s: 3.0,
        tare_ft_sensor: true,
    };
    let exec = ExecConfig::default();
    let out = execute_compliant_move(&mut world, &cmd, &exec);
    assert_eq!(out.status, MoveStatus::TimedOut);
    // transients die within a second; the decimated trace samples every 10 ms
    let samples_per_second = (1.0 / exec.dt_s) as usize / exec.trace_every;
    let tail = &out.trace[2 * samples_per_second..];
    // reconstruct kinetic energy from the recorded velocity? the trace holds
    // status only, so check force settling instead: monotone convergence of
    // |z_force| to the equilibrium value within the tolerance
    let last = tail.last().unwrap().z_force;
    for s in tail {
        assert!(
            (s.z_force - last).abs() < 1e-6,
            "force still ringing after transients: {} vs {}",
            s.z_force,
            last
        );
    }
}

/// Flange kinetic energy directly: sampled over the final second of a press,
/// it never grows by more than the tolerance.
#[test]
fn kinetic_energy_non_increasing_in_sustained_press() {
    let spec = TaskSpec::with_defaults(TaskKind::FmbInsertion {
        shape: PegShape::HalfPipe,
    });
    let mut world = (0..20)
        .map(|s| spawn_task(&spec, s))
        .find(|w| w.bore_yaw().unwrap() > 1.0)
        .expect("a pi draw exists");
    world.pick_up("peg").unwrap();
    let spec_gains = StiffnessSpec::benchmark_default();
    let gains = benchtop::control::synthesize_gains(&spec_gains).unwrap();
    let target = world
        .named_pose(1)
        .unwrap()
        .multiply(&pose_rpy([0.0, 0.0, -0.02], [0.0, 0.0, 0.0]).unwrap());
    let mut state = world.flange;
    state.x_target = target;
    world.flange = state;
    let exec = ExecConfig::default();
    let kinetic = |w: &World| -> f64 {
        let v = &w.flange.x_dot;
        (0..6)
            .map(|i| 0.5 * gains.m[i] * v[i] * v[i])
            .sum()
    };
    let mut energies = Vec::new();
    use benchtop::control::ControlWorld;
    for step in 0..3000 {
        let raw = world.contact_wrench();
        let state = world.flange;
        let next = benchtop::control::admittance_step(
            &state,
            &gains,
            &(-raw),
            &benchtop::control::Wrench::zeros(),
            exec.dt_s,
            &exec.velocity_limit(),
        );
        world.set_flange(next);
        world.after_motion(exec.dt_s);
        if step >= 2000 {
            energies.push(kinetic(&world));
        }
    }
    for pair in energies.windows(2) {
        assert!(
            pair[1] <= pair[0] + 1e-6,
            "kinetic energy grew after transients: {} -> {}",
            pair[0],
            pair[1]
        );
    }
}

/// Identical (seed, program) pairs produce bitwise-identical traces.
#[test]
fn rollout_determinism_is_bitwise() {
    let program = reference_program(TaskKind::CableUnroute);
    let run = || {
        let mut world = spawn_task(&TaskSpec::with_defaults(TaskKind::CableUnroute), 11);
        let trace = interpret(&program, &mut world, &InterpConfig::default());
        serde_json::to_string(&trace).unwrap()
    };
    assert_eq!(run(), run());
}

/// The connector policy inserts through perception noise exactly when the
/// ring search covers the drawn offset.
#[test]
fn connector_search_coverage_matches_geometry() {
    let spec = TaskSpec::with_defaults(TaskKind::ConnectorInsertion {
        use_perception: true,
    });
    let program = reference_program(spec.kind);
    let capture = 0.0030; // ring radius + clearance
    for seed in 0..20 {
        let mut world = spawn_task(&spec, seed);
        let est = world.estimate_and_update_pose("socket").unwrap();
        let offset = (est.translation.x.powi(2) + est.translation.y.powi(2)).sqrt();
        let trace = interpret(&program, &mut world, &InterpConfig::default());
        if offset < capture - 2e-4 {
            assert!(trace.success, "seed {seed}: offset {offset:.4} should insert");
        }
        if offset > capture + 2e-4 {
            assert!(!trace.success, "seed {seed}: offset {offset:.4} should miss");
        }
    }
}
