//! Embedded geometry/controller defaults and the key-value override file.
//!
//! The file format is TOML with four tables; every key is optional and falls
//! back to the embedded default:
//!
//! ```toml
//! [control]
//! dt_s = 0.001                # control loop period, seconds
//! trace_every = 10            # status samples kept: one per N steps
//! eps_approx = 0.05           # half-width of ~= / !~= comparisons
//! default_timeout_s = 10.0    # move timeout when the policy omits one
//! max_linear_speed = 0.25     # m/s saturation
//! max_angular_speed = 1.5     # rad/s saturation
//! ptp_stiffness = 20000.0     # N/m, point-to-point translation gain
//! ptp_rot_stiffness = 2000.0  # N*m/rad
//! ptp_fault_force = 30.0      # N, fault threshold for stiff moves
//! ptp_tolerance = 0.0005      # m, point-to-point settle tolerance
//!
//! [hole]
//! clearance = 0.0015          # m, bore radius margin around the peg
//! alignment_tolerance = 0.1   # rad, rotational insertion window
//! required_depth = 0.010      # m, success depth
//! bore_depth = 0.012          # m, bottom of the bore
//! hover_height = 0.010        # m, staging pose above the surface
//! k_env = 10000.0             # N/m, penalty stiffness
//! c_env = 50.0                # N*s/m, penalty damping
//!
//! [channel]
//! half_width = 0.020          # m, inner wall faces at +/- this x
//! wall_thickness = 0.003      # m, outer faces at +/- (half_width + this)
//! lip_bottom_z = 0.009
//! lip_top_z = 0.012
//! window_min_x = -0.008       # m, opening in the lip
//! window_max_x = 0.0
//! free_z = 0.0125             # m, unroute success height
//! start_offset = 0.014        # m, |x| of the randomized start
//! unroute_grasp_z = 0.004     # m, grasp height inside the channel
//! route_start_z = 0.020       # m, grasp height above the channel
//! k_env = 10000.0
//! c_env = 50.0
//!
//! [perception]
//! max_offset = 0.004          # m, pose-estimate error bound
//! ```

use crate::control::ExecConfig;
use crate::sim::{PerceptionNoiseModel, SimError};
use serde::{Deserialize, Serialize};

/// Peg-in-hole fixture geometry (FMB pegs and the connector socket).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HoleGeometry {
    pub clearance: f64,
    pub alignment_tolerance: f64,
    pub required_depth: f64,
    pub bore_depth: f64,
    pub hover_height: f64,
    pub k_env: f64,
    pub c_env: f64,
    /// Elastic allowance on the success lateral bound: penalty walls flex a
    /// fraction of a millimeter under the seating spring, a seated peg is
    /// still inside the bore.
    pub lateral_slack: f64,
}

impl Default for HoleGeometry {
    fn default() -> Self {
        HoleGeometry {
            clearance: 0.0015,
            alignment_tolerance: 0.1,
            required_depth: 0.010,
            bore_depth: 0.012,
            hover_height: 0.010,
            k_env: 1e4,
            c_env: 50.0,
            lateral_slack: 5e-4,
        }
    }
}

impl HoleGeometry {
    pub fn validate(&self) -> Result<(), SimError> {
        for (name, v) in [
            ("clearance", self.clearance),
            ("alignment_tolerance", self.alignment_tolerance),
            ("required_depth", self.required_depth),
            ("bore_depth", self.bore_depth),
            ("hover_height", self.hover_height),
            ("k_env", self.k_env),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SimError::InvalidSpec(format!("hole.{name} = {v}")));
            }
        }
        if self.bore_depth < self.required_depth {
            return Err(SimError::InvalidSpec(
                "hole.bore_depth shallower than required_depth".into(),
            ));
        }
        Ok(())
    }
}

/// Cable channel geometry: inner walls, a lip plate with an opening window,
/// and the heights the tasks start and succeed at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelGeometry {
    pub half_width: f64,
    pub wall_thickness: f64,
    pub lip_bottom_z: f64,
    pub lip_top_z: f64,
    pub window_min_x: f64,
    pub window_max_x: f64,
    pub free_z: f64,
    pub start_offset: f64,
    pub unroute_grasp_z: f64,
    pub route_start_z: f64,
    pub k_env: f64,
    pub c_env: f64,
}

impl Default for ChannelGeometry {
    fn default() -> Self {
        ChannelGeometry {
            half_width: 0.020,
            wall_thickness: 0.003,
            lip_bottom_z: 0.009,
            lip_top_z: 0.012,
            window_min_x: -0.008,
            window_max_x: 0.0,
            free_z: 0.0125,
            start_offset: 0.014,
            unroute_grasp_z: 0.004,
            route_start_z: 0.020,
            k_env: 1e4,
            c_env: 50.0,
        }
    }
}

impl ChannelGeometry {
    pub fn window_width(&self) -> f64 {
        self.window_max_x - self.window_min_x
    }

    pub fn in_window(&self, x: f64) -> bool {
        x >= self.window_min_x && x <= self.window_max_x
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.window_width() <= 0.0 {
            return Err(SimError::InvalidSpec("channel window has no width".into()));
        }
        if !(self.lip_top_z > self.lip_bottom_z && self.lip_bottom_z > 0.0) {
            return Err(SimError::InvalidSpec("channel lip band inverted".into()));
        }
        if self.window_min_x < -self.half_width || self.window_max_x > self.half_width {
            return Err(SimError::InvalidSpec(
                "channel window outside the walls".into(),
            ));
        }
        if self.start_offset >= self.half_width {
            return Err(SimError::InvalidSpec(
                "cable start offset outside the walls".into(),
            ));
        }
        if self.in_window(self.start_offset) || self.in_window(-self.start_offset) {
            return Err(SimError::InvalidSpec(
                "cable start offset falls inside the opening window".into(),
            ));
        }
        if self.unroute_grasp_z >= self.lip_bottom_z {
            return Err(SimError::InvalidSpec(
                "unroute grasp must start below the lip".into(),
            ));
        }
        if self.route_start_z <= self.lip_top_z {
            return Err(SimError::InvalidSpec(
                "route grasp must start above the lip".into(),
            ));
        }
        if self.free_z <= self.lip_top_z {
            return Err(SimError::InvalidSpec(
                "free_z must clear the lip top".into(),
            ));
        }
        Ok(())
    }
}

/// Everything overridable from a config file: controller parameters plus the
/// per-fixture geometry. Defaults are embedded; a file only patches keys.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub control: ExecConfig,
    pub hole: HoleGeometry,
    pub channel: ChannelGeometry,
    pub perception: PerceptionNoiseModel,
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, SimError> {
        let config: SimConfig = toml::from_str(text)
            .map_err(|e| SimError::InvalidSpec(format!("config parse error: {e}")))?;
        config.hole.validate()?;
        config.channel.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SimError::InvalidSpec(format!("config read error: {e}")))?;
        SimConfig::from_toml_str(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = SimConfig::default();
        assert!(c.hole.validate().is_ok());
        assert!(c.channel.validate().is_ok());
    }

    #[test]
    fn partial_override_keeps_defaults() {
        let c = SimConfig::from_toml_str("[hole]\nclearance = 0.002\n").unwrap();
        assert_eq!(c.hole.clearance, 0.002);
        assert_eq!(c.hole.required_depth, 0.010);
        assert_eq!(c.control.dt_s, 1e-3);
    }

    #[test]
    fn empty_file_is_all_defaults() {
        let c = SimConfig::from_toml_str("").unwrap();
        assert_eq!(c, SimConfig::default());
    }

    #[test]
    fn bad_geometry_rejected() {
        let err = SimConfig::from_toml_str("[channel]\nwindow_min_x = 0.01\nwindow_max_x = 0.0\n");
        assert!(err.is_err());
    }
}
