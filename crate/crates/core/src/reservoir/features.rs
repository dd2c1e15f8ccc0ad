use crate::geometry::Point2;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::EsnError;

/// Joints consumed by the classifier, in feature order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Joint {
    Neck,
    LeftShoulder,
    RightShoulder,
    LeftWrist,
    RightWrist,
}

pub const JOINT_ORDER: [Joint; 5] = [
    Joint::Neck,
    Joint::LeftShoulder,
    Joint::RightShoulder,
    Joint::LeftWrist,
    Joint::RightWrist,
];

/// Two coordinates per joint plus the fingertip energy.
pub const FEATURE_DIM: usize = 2 * JOINT_ORDER.len() + 1;

/// Shoulder distances at or below this many pixels cannot be normalized.
pub const MIN_SHOULDER_DISTANCE: f64 = 1e-6;

/// One frame of 2D keypoints in image pixels.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SkeletonFrame {
    pub joints: BTreeMap<Joint, Point2>,
}

impl SkeletonFrame {
    pub fn with(mut self, joint: Joint, p: Point2) -> Self {
        self.joints.insert(joint, p);
        self
    }

    fn get(&self, j: Joint) -> Result<Point2, EsnError> {
        let p = self.joints.get(&j).copied().ok_or(EsnError::MissingJoint(j))?;
        if !p.is_finite() {
            return Err(EsnError::NonFinite(format!("joint {j:?}")));
        }
        Ok(p)
    }
}

/// Joint coordinates relative to the neck, in units of shoulder distance.
pub fn normalize_skeleton(frame: &SkeletonFrame) -> Result<Vec<f64>, EsnError> {
    let neck = frame.get(Joint::Neck)?;
    let scale = frame
        .get(Joint::LeftShoulder)?
        .distance(frame.get(Joint::RightShoulder)?);
    if scale <= MIN_SHOULDER_DISTANCE {
        return Err(EsnError::DegenerateScale(scale));
    }
    let mut out = Vec::with_capacity(2 * JOINT_ORDER.len());
    for j in JOINT_ORDER {
        let p = frame.get(j)?;
        out.push((p.x - neck.x) / scale);
        out.push((p.y - neck.y) / scale);
    }
    Ok(out)
}

/// Cropped fingertip intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FingertipPatch {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<f64>,
}

impl FingertipPatch {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self, EsnError> {
        if width == 0 || height == 0 || pixels.is_empty() {
            return Err(EsnError::EmptyPatch);
        }
        if pixels.len() != width * height {
            return Err(EsnError::DimensionMismatch {
                expected: width * height,
                got: pixels.len(),
            });
        }
        if let Some(v) = pixels.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(EsnError::NonFinite(format!("patch intensity {v} outside [0, 1]")));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }
}

/// Mean patch intensity, i.e. the pixel sum scaled into `[0, 1]`.
pub fn fingertip_energy(patch: &FingertipPatch) -> Result<f64, EsnError> {
    if patch.pixels.is_empty() {
        return Err(EsnError::EmptyPatch);
    }
    Ok(patch.pixels.iter().sum::<f64>() / patch.pixels.len() as f64)
}

/// Concatenates normalized joints and fingertip energy into one input vector.
pub fn feature_vector(frame: &SkeletonFrame, patch: &FingertipPatch) -> Result<Vec<f64>, EsnError> {
    let mut v = normalize_skeleton(frame)?;
    v.push(fingertip_energy(patch)?);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame() -> SkeletonFrame {
        SkeletonFrame::default()
            .with(Joint::Neck, Point2::new(100.0, 50.0))
            .with(Joint::LeftShoulder, Point2::new(80.0, 56.0))
            .with(Joint::RightShoulder, Point2::new(120.0, 56.0))
            .with(Joint::LeftWrist, Point2::new(70.0, 110.0))
            .with(Joint::RightWrist, Point2::new(140.0, 20.0))
    }

    fn map_frame(f: &SkeletonFrame, g: impl Fn(Point2) -> Point2) -> SkeletonFrame {
        SkeletonFrame {
            joints: f.joints.iter().map(|(&j, &p)| (j, g(p))).collect(),
        }
    }

    #[test]
    fn translation_invariant() {
        let f = frame();
        let t = map_frame(&f, |p| p.add(Point2::new(5.0, 7.0)));
        assert_eq!(normalize_skeleton(&f).unwrap(), normalize_skeleton(&t).unwrap());
    }

    #[test]
    fn scale_about_neck_invariant() {
        let f = frame();
        let neck = Point2::new(100.0, 50.0);
        let s = map_frame(&f, |p| neck.add(p.sub(neck).scale(2.0)));
        assert_eq!(normalize_skeleton(&f).unwrap(), normalize_skeleton(&s).unwrap());
    }

    #[test]
    fn missing_neck() {
        let mut f = frame();
        f.joints.remove(&Joint::Neck);
        assert_eq!(normalize_skeleton(&f), Err(EsnError::MissingJoint(Joint::Neck)));
    }

    #[test]
    fn coincident_shoulders() {
        let f = frame().with(Joint::RightShoulder, Point2::new(80.0, 56.0));
        assert!(matches!(normalize_skeleton(&f), Err(EsnError::DegenerateScale(_))));
    }

    #[test]
    fn energy_examples() {
        let zero = FingertipPatch::new(3, 3, vec![0.0; 9]).unwrap();
        assert_eq!(fingertip_energy(&zero).unwrap(), 0.0);
        let ones = FingertipPatch::new(4, 4, vec![1.0; 16]).unwrap();
        assert_eq!(fingertip_energy(&ones).unwrap(), 1.0);
        let quarter = FingertipPatch::new(2, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(fingertip_energy(&quarter).unwrap(), 0.25);
        assert_eq!(FingertipPatch::new(0, 0, vec![]), Err(EsnError::EmptyPatch));
        let hollow = FingertipPatch {
            width: 0,
            height: 0,
            pixels: vec![],
        };
        assert_eq!(fingertip_energy(&hollow), Err(EsnError::EmptyPatch));
    }

    #[test]
    fn feature_dimension() {
        let p = FingertipPatch::new(1, 1, vec![0.5]).unwrap();
        assert_eq!(feature_vector(&frame(), &p).unwrap().len(), FEATURE_DIM);
    }
}
