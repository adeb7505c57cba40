//! Penalty-contact evaluation for the two fixture families.
//!
//! All surfaces are one-sided: `force = k_env * penetration + c_env * rate`,
//! clamped at zero (no adhesion), applied along the surface normal as the
//! reaction on the tool. Which side of the lip the cable is on is tracked as
//! a zone so penalty forces never flip sign inside a plate.

use super::config::{ChannelGeometry, HoleGeometry};
use super::ShapeSymmetry;
use crate::control::{ControllerState, Wrench};
use serde::{Deserialize, Serialize};

/// Where the cable grasp point sits relative to the lip plate. Transitions:
/// Below <-> InSlot through the window, InSlot <-> Above across the lip top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LipZone {
    Below,
    InSlot,
    Above,
}

fn penalty(pen: f64, rate: f64, k: f64, c: f64) -> f64 {
    if pen > 0.0 {
        (k * pen + c * rate).max(0.0)
    } else {
        0.0
    }
}

/// Reaction on a peg interacting with a hole fixture whose surface plane is
/// z = 0 and bore center is the origin.
pub fn hole_reaction(
    geo: &HoleGeometry,
    symmetry: &ShapeSymmetry,
    bore_yaw: f64,
    in_bore: bool,
    state: &ControllerState,
) -> Wrench {
    let p = state.x.translation;
    let v = &state.x_dot;
    let mut w = Wrench::zeros();
    if p.z >= 0.0 {
        return w;
    }
    let lateral = (p.x * p.x + p.y * p.y).sqrt();
    let aligned = lateral <= geo.clearance && symmetry.aligned(state.x.rotation.z, bore_yaw);
    if in_bore || aligned {
        // inside the bore: wall ring at the clearance radius, floor at the bore bottom
        let wall_pen = lateral - geo.clearance;
        if wall_pen > 0.0 && lateral > 1e-12 {
            let ox = p.x / lateral;
            let oy = p.y / lateral;
            let outward_rate = v[0] * ox + v[1] * oy;
            let f = penalty(wall_pen, outward_rate, geo.k_env, geo.c_env);
            w[0] -= f * ox;
            w[1] -= f * oy;
        }
        let bottom_pen = -geo.bore_depth - p.z;
        w[2] += penalty(bottom_pen, -v[2], geo.k_env, geo.c_env);
    } else {
        // misaligned: the peg rests on the tabletop
        w[2] += penalty(-p.z, -v[2], geo.k_env, geo.c_env);
    }
    w
}

/// Reaction on the cable grasp point in a channel fixture. Plane model in xz;
/// y is unconstrained.
pub fn channel_reaction(geo: &ChannelGeometry, zone: LipZone, state: &ControllerState) -> Wrench {
    let p = state.x.translation;
    let v = &state.x_dot;
    let mut w = Wrench::zeros();

    if p.x.abs() > geo.half_width + geo.wall_thickness {
        // outside the channel footprint the board is solid up to the lip top
        if p.z < geo.lip_top_z {
            w[2] += penalty(geo.lip_top_z - p.z, -v[2], geo.k_env, geo.c_env);
        }
        return w;
    }

    match zone {
        LipZone::Below => {
            // floor
            w[2] += penalty(-p.z, -v[2], geo.k_env, geo.c_env);
            // lip underside, except over the window
            if !geo.in_window(p.x) {
                let pen = p.z - geo.lip_bottom_z;
                w[2] -= penalty(pen, v[2], geo.k_env, geo.c_env);
            }
            // inner wall faces
            let wall_pen = p.x.abs() - geo.half_width;
            if wall_pen > 0.0 {
                let sign = p.x.signum();
                w[0] -= sign * penalty(wall_pen, sign * v[0], geo.k_env, geo.c_env);
            }
        }
        LipZone::InSlot => {
            // window edges
            let lo_pen = geo.window_min_x - p.x;
            if lo_pen > 0.0 {
                w[0] += penalty(lo_pen, -v[0], geo.k_env, geo.c_env);
            }
            let hi_pen = p.x - geo.window_max_x;
            if hi_pen > 0.0 {
                w[0] -= penalty(hi_pen, v[0], geo.k_env, geo.c_env);
            }
        }
        LipZone::Above => {
            // lip top, except over the window
            if !geo.in_window(p.x) {
                let pen = geo.lip_top_z - p.z;
                w[2] += penalty(pen, -v[2], geo.k_env, geo.c_env);
            }
        }
    }
    w
}

/// Zone transition for the cable grasp point after a motion step.
pub fn next_zone(geo: &ChannelGeometry, zone: LipZone, x: f64, z: f64) -> LipZone {
    match zone {
        LipZone::Below => {
            if geo.in_window(x) && z > geo.lip_bottom_z {
                LipZone::InSlot
            } else {
                LipZone::Below
            }
        }
        LipZone::InSlot => {
            if z > geo.lip_top_z {
                LipZone::Above
            } else if z < geo.lip_bottom_z {
                LipZone::Below
            } else {
                LipZone::InSlot
            }
        }
        LipZone::Above => {
            if geo.in_window(x) && z < geo.lip_top_z {
                LipZone::InSlot
            } else {
                LipZone::Above
            }
        }
    }
}
