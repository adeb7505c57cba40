//! Rigid-body poses as translation + roll-pitch-yaw, plus the error metrics
//! the termination conditions observe.
//!
//! Convention: extrinsic X-Y-Z, i.e. `R = Rz(yaw) * Ry(pitch) * Rx(roll)`,
//! all angles normalized to (-pi, pi] after every constructing operation.

use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PoseKindError {
    #[error("pose components must be finite, got translation {translation:?} rotation {rotation:?}")]
    InvalidPose {
        translation: [f64; 3],
        rotation: [f64; 3],
    },
}

/// Wrap an angle into (-pi, pi].
pub fn normalize_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}

/// A rigid transform: translation in meters, rotation as roll-pitch-yaw in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub translation: Vector3<f64>,
    /// (roll, pitch, yaw), each in (-pi, pi].
    pub rotation: Vector3<f64>,
}

/// Scalar distance between two poses, split into translation and rotation parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseError {
    /// Euclidean norm of the translation difference, meters.
    pub translation_error: f64,
    /// Geodesic angle of the relative rotation, in [0, pi].
    pub rotation_error: f64,
}

impl Pose {
    pub fn identity() -> Self {
        Pose {
            translation: Vector3::zeros(),
            rotation: Vector3::zeros(),
        }
    }

    pub fn rotation_matrix(&self) -> Rotation3<f64> {
        Rotation3::from_euler_angles(self.rotation.x, self.rotation.y, self.rotation.z)
    }

    pub fn multiply(&self, other: &Pose) -> Pose {
        pose_multiply(self, other)
    }

    pub fn yaw(&self) -> f64 {
        self.rotation.z
    }
}

/// Build a pose from raw translation/rotation components, normalizing angles.
pub fn pose_rpy(translation: [f64; 3], rotation: [f64; 3]) -> Result<Pose, PoseKindError> {
    let all_finite = translation.iter().chain(rotation.iter()).all(|v| v.is_finite());
    if !all_finite {
        return Err(PoseKindError::InvalidPose {
            translation,
            rotation,
        });
    }
    Ok(Pose {
        translation: Vector3::from_column_slice(&translation),
        rotation: Vector3::new(
            normalize_angle(rotation[0]),
            normalize_angle(rotation[1]),
            normalize_angle(rotation[2]),
        ),
    })
}

/// `p` then `q` applied on top: translation = p.t + R(p)·q.t, rotations composed
/// as matrices and converted back to RPY.
pub fn pose_multiply(p: &Pose, q: &Pose) -> Pose {
    let rp = p.rotation_matrix();
    let rq = q.rotation_matrix();
    let (roll, pitch, yaw) = (rp * rq).euler_angles();
    Pose {
        translation: p.translation + rp * q.translation,
        rotation: Vector3::new(
            normalize_angle(roll),
            normalize_angle(pitch),
            normalize_angle(yaw),
        ),
    }
}

/// Translation norm plus geodesic rotation distance between two poses.
pub fn pose_error(current: &Pose, target: &Pose) -> PoseError {
    let translation_error = (current.translation - target.translation).norm();
    let relative = current.rotation_matrix().inverse() * target.rotation_matrix();
    // angle of the relative rotation: acos((trace - 1) / 2), clamped for roundoff
    let cos_angle = ((relative.matrix().trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    PoseError {
        translation_error,
        rotation_error: cos_angle.acos(),
    }
}
