//! Pinhole camera model shared by the grasp pipeline and the scene generator.
//! Camera frame: x right, y down, z forward.

use crate::linalg::{self, Mat3, Vec3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("invalid intrinsics: {0}")]
pub struct IntrinsicsError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
}

impl CameraIntrinsics {
    pub fn validate(&self) -> Result<(), IntrinsicsError> {
        if !(self.fx > 0.0 && self.fy > 0.0 && self.fx.is_finite() && self.fy.is_finite()) {
            return Err(IntrinsicsError("focal lengths must be positive".into()));
        }
        if !(self.cx >= 0.0 && self.cx < self.width as f64) {
            return Err(IntrinsicsError(format!("cx {} outside [0, {})", self.cx, self.width)));
        }
        if !(self.cy >= 0.0 && self.cy < self.height as f64) {
            return Err(IntrinsicsError(format!("cy {} outside [0, {})", self.cy, self.height)));
        }
        Ok(())
    }

    /// Pixel → camera-frame point at depth `d`.
    pub fn deproject_pixel(&self, u: f64, v: f64, d: f64) -> Vec3 {
        [(u - self.cx) * d / self.fx, (v - self.cy) * d / self.fy, d]
    }
}

/// Points at or nearer than this depth are treated as behind the camera.
pub const NEAR_PLANE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    Pixel { u: f64, v: f64, depth: f64 },
    BehindCamera,
}

/// Intrinsics plus a world pose. `rotation` maps world vectors into the
/// camera frame; `position` is the optical center in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Camera {
    pub intrinsics: CameraIntrinsics,
    pub position: Vec3,
    pub rotation: Mat3,
}

impl Camera {
    /// Camera at the origin whose frame coincides with the world frame.
    pub fn at_origin(intrinsics: CameraIntrinsics) -> Self {
        Self {
            intrinsics,
            position: [0.0; 3],
            rotation: linalg::identity(),
        }
    }

    /// Looks from `eye` toward `target` with `up` as the world up direction.
    pub fn look_at(intrinsics: CameraIntrinsics, eye: Vec3, target: Vec3, up: Vec3) -> Self {
        let forward = linalg::normalize(linalg::sub(target, eye));
        let mut right = linalg::cross(forward, up);
        if linalg::norm(right) < 1e-9 {
            // Looking straight along `up`: any perpendicular works.
            right = linalg::cross(forward, [1.0, 0.0, 0.0]);
            if linalg::norm(right) < 1e-9 {
                right = linalg::cross(forward, [0.0, 1.0, 0.0]);
            }
        }
        let right = linalg::normalize(right);
        let down = linalg::cross(forward, right);
        Self {
            intrinsics,
            position: eye,
            rotation: [right, down, forward],
        }
    }

    pub fn to_camera_frame(&self, p: Vec3) -> Vec3 {
        linalg::mat_vec(&self.rotation, linalg::sub(p, self.position))
    }

    pub fn to_world_frame(&self, p: Vec3) -> Vec3 {
        linalg::add(linalg::mat_vec(&linalg::transpose(&self.rotation), p), self.position)
    }

    pub fn project(&self, world: Vec3) -> Projection {
        let [x, y, z] = self.to_camera_frame(world);
        if z <= NEAR_PLANE {
            return Projection::BehindCamera;
        }
        let k = &self.intrinsics;
        Projection::Pixel {
            u: k.fx * x / z + k.cx,
            v: k.fy * y / z + k.cy,
            depth: z,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> CameraIntrinsics {
        CameraIntrinsics {
            fx: 100.0,
            fy: 100.0,
            cx: 64.0,
            cy: 64.0,
            width: 128,
            height: 128,
        }
    }

    #[test]
    fn principal_ray_and_offsets() {
        let cam = Camera::at_origin(k());
        assert_eq!(
            cam.project([0.0, 0.0, 1.0]),
            Projection::Pixel { u: 64.0, v: 64.0, depth: 1.0 }
        );
        assert_eq!(
            cam.project([0.5, 0.0, 1.0]),
            Projection::Pixel { u: 114.0, v: 64.0, depth: 1.0 }
        );
        assert_eq!(cam.project([0.0, 0.0, -1.0]), Projection::BehindCamera);
    }

    #[test]
    fn look_at_frame_is_orthonormal() {
        let cam = Camera::look_at(k(), [3.0, 1.0, 1.5], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
        assert!((linalg::det(&cam.rotation) - 1.0).abs() < 1e-12);
        match cam.project([0.0, 0.0, 0.0]) {
            Projection::Pixel { u, v, .. } => {
                assert!((u - 64.0).abs() < 1e-9 && (v - 64.0).abs() < 1e-9)
            }
            _ => panic!("target must be visible"),
        }
        let p = [0.3, -0.2, 0.9];
        let back = cam.to_world_frame(cam.to_camera_frame(p));
        for i in 0..3 {
            assert!((back[i] - p[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn intrinsics_validation() {
        assert!(k().validate().is_ok());
        assert!(CameraIntrinsics { fx: 0.0, ..k() }.validate().is_err());
        assert!(CameraIntrinsics { cx: 128.0, ..k() }.validate().is_err());
    }
}
