//! Grasp pose estimation from a depth image and per-object masks.
//!
//! Pipeline: masked deprojection → nearest object → PCA oriented bounding
//! box → top/front approach decision. Object detection and segmentation are
//! upstream; masks arrive as inputs.

use crate::camera::CameraIntrinsics;
use crate::linalg::{self, Mat3, Vec3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Camera-frame "up" (the camera's −y axis).
pub const UP: Vec3 = [0.0, -1.0, 0.0];
/// `|w − h|` at or below this counts as a tie (resolved to a top grasp).
pub const TIE_TOLERANCE: f64 = 1e-9;
/// Relative eigenvalue floor below which a covariance direction is degenerate.
const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GraspError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no valid depth under mask{}", mask_suffix(*.mask))]
    EmptyCloud { mask: Option<usize> },
    #[error("no point clouds given")]
    EmptyInput,
    #[error("degenerate cloud{}: {reason}", mask_suffix(*.mask))]
    DegenerateCloud { mask: Option<usize>, reason: String },
    #[error(transparent)]
    Intrinsics(#[from] crate::camera::IntrinsicsError),
    #[error("invalid depth image: {0}")]
    InvalidDepth(String),
}

fn mask_suffix(mask: Option<usize>) -> String {
    mask.map(|m| format!(" {m}")).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthImage {
    pub width: usize,
    pub height: usize,
    /// Row-major meters; 0 marks an invalid pixel.
    pub depth: Vec<f64>,
}

impl DepthImage {
    pub fn new(width: usize, height: usize, depth: Vec<f64>) -> Result<Self, GraspError> {
        if depth.len() != width * height {
            return Err(GraspError::DimensionMismatch(format!(
                "{} depth values for a {width}x{height} image",
                depth.len()
            )));
        }
        if let Some(i) = depth.iter().position(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(GraspError::InvalidDepth(format!(
                "pixel {i} has depth {}",
                depth[i]
            )));
        }
        Ok(Self {
            width,
            height,
            depth,
        })
    }

    /// 16-bit PGM in millimeters.
    pub fn from_pgm(bytes: &[u8]) -> Result<Self, GraspError> {
        let pgm = crate::imageio::decode_pgm(bytes)
            .map_err(|e| GraspError::InvalidDepth(e.to_string()))?;
        Self::new(
            pgm.width,
            pgm.height,
            pgm.samples.iter().map(|&mm| mm as f64 / 1000.0).collect(),
        )
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mm: Vec<u16> = self
            .depth
            .iter()
            .map(|d| (d * 1000.0).round().clamp(0.0, 65535.0) as u16)
            .collect();
        crate::imageio::encode_pgm16(self.width, self.height, &mm)
    }

    pub fn at(&self, u: usize, v: usize) -> f64 {
        self.depth[v * self.width + u]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectMask {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl ObjectMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, GraspError> {
        if bits.len() != width * height {
            return Err(GraspError::DimensionMismatch(format!(
                "{} mask bits for a {width}x{height} mask",
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    /// 8-bit PGM; any nonzero sample is masked.
    pub fn from_pgm(bytes: &[u8]) -> Result<Self, GraspError> {
        let pgm = crate::imageio::decode_pgm(bytes)
            .map_err(|e| GraspError::DimensionMismatch(e.to_string()))?;
        Self::new(pgm.width, pgm.height, pgm.samples.iter().map(|&s| s != 0).collect())
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let px: Vec<u8> = self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
        crate::imageio::encode_pgm8(self.width, self.height, &px)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointCloud {
    pub points: Vec<Vec3>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec3>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centroid(&self) -> Option<Vec3> {
        if self.points.is_empty() {
            return None;
        }
        let n = self.points.len() as f64;
        let s = self.points.iter().fold([0.0; 3], |acc, &p| linalg::add(acc, p));
        Some(linalg::scale(s, 1.0 / n))
    }

    pub fn transformed(&self, rotation: &Mat3, translation: Vec3) -> PointCloud {
        PointCloud::new(
            self.points
                .iter()
                .map(|&p| linalg::add(linalg::mat_vec(rotation, p), translation))
                .collect(),
        )
    }
}

/// Masked pixels with valid depth become camera-frame points.
pub fn deproject(
    depth: &DepthImage,
    mask: &ObjectMask,
    k: &CameraIntrinsics,
) -> Result<PointCloud, GraspError> {
    k.validate()?;
    if depth.width != mask.width || depth.height != mask.height {
        return Err(GraspError::DimensionMismatch(format!(
            "depth {}x{} vs mask {}x{}",
            depth.width, depth.height, mask.width, mask.height
        )));
    }
    if depth.width != k.width || depth.height != k.height {
        return Err(GraspError::DimensionMismatch(format!(
            "depth {}x{} vs intrinsics {}x{}",
            depth.width, depth.height, k.width, k.height
        )));
    }
    let mut points = Vec::new();
    for v in 0..depth.height {
        for u in 0..depth.width {
            let i = v * depth.width + u;
            let d = depth.depth[i];
            if mask.bits[i] && d > 0.0 {
                points.push(k.deproject_pixel(u as f64, v as f64, d));
            }
        }
    }
    if points.is_empty() {
        return Err(GraspError::EmptyCloud { mask: None });
    }
    Ok(PointCloud::new(points))
}

/// Index of the cloud whose centroid is nearest the camera origin; ties go
/// to the lowest index.
pub fn closest_object(clouds: &[PointCloud]) -> Result<usize, GraspError> {
    if clouds.is_empty() {
        return Err(GraspError::EmptyInput);
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in clouds.iter().enumerate() {
        let centroid = c.centroid().ok_or(GraspError::EmptyCloud { mask: Some(i) })?;
        let d = linalg::norm(centroid);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    Ok(best.expect("nonempty").0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedBBox3 {
    /// Point centroid (center of gravity); the grasp is anchored here.
    pub center: Vec3,
    /// Geometric center of the box; the box spans `box_center ± extents/2`
    /// along `axes`.
    pub box_center: Vec3,
    /// Unit axes in descending-variance order; right-handed.
    pub axes: [Vec3; 3],
    /// Full side lengths along `axes`.
    pub extents: Vec3,
    /// Covariance eigenvalues matching `axes`.
    pub variances: Vec3,
}

impl OrientedBBox3 {
    /// Whether `p` lies inside the box grown by `margin` on every side.
    pub fn contains(&self, p: Vec3, margin: f64) -> bool {
        let d = linalg::sub(p, self.box_center);
        (0..3).all(|i| linalg::dot(d, self.axes[i]).abs() <= 0.5 * self.extents[i] + margin)
    }

    pub fn corners(&self) -> [Vec3; 8] {
        let mut out = [[0.0; 3]; 8];
        for (n, c) in out.iter_mut().enumerate() {
            let mut p = self.box_center;
            for i in 0..3 {
                let s = if n >> i & 1 == 1 { 0.5 } else { -0.5 };
                p = linalg::add(p, linalg::scale(self.axes[i], s * self.extents[i]));
            }
            *c = p;
        }
        out
    }

    /// Vertical extent of the box along [`UP`].
    pub fn height(&self) -> f64 {
        (0..3)
            .map(|i| self.extents[i] * linalg::dot(self.axes[i], UP).abs())
            .sum()
    }

    /// Widest horizontal extent of the box footprint and its direction in the
    /// camera x–z plane.
    ///
    /// The footprint width along a horizontal unit `d` is `Σ eᵢ|aᵢ·d|`, whose
    /// maximum over `d` is the longest of the signed sums `|Σ sᵢ eᵢ hᵢ|` of the
    /// horizontal axis components `hᵢ`.
    pub fn footprint(&self) -> (f64, [f64; 2]) {
        let h: Vec<[f64; 2]> = (0..3)
            .map(|i| {
                [
                    self.extents[i] * self.axes[i][0],
                    self.extents[i] * self.axes[i][2],
                ]
            })
            .collect();
        let mut best = (0.0, [1.0, 0.0]);
        for signs in [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [1.0, -1.0, -1.0]] {
            let x: f64 = (0..3).map(|i| signs[i] * h[i][0]).sum();
            let z: f64 = (0..3).map(|i| signs[i] * h[i][1]).sum();
            let len = x.hypot(z);
            if len > best.0 {
                best = (len, [x / len, z / len]);
            }
        }
        best
    }

    /// Box extent along a unit direction.
    pub fn extent_along(&self, d: Vec3) -> f64 {
        (0..3)
            .map(|i| self.extents[i] * linalg::dot(self.axes[i], d).abs())
            .sum()
    }
}

fn fix_sign(v: Vec3) -> Vec3 {
    let mut k = 0;
    for i in 1..3 {
        if v[i].abs() > v[k].abs() {
            k = i;
        }
    }
    if v[k] < 0.0 {
        linalg::scale(v, -1.0)
    } else {
        v
    }
}

/// PCA oriented bounding box of a cloud.
pub fn pca_bbox(cloud: &PointCloud) -> Result<OrientedBBox3, GraspError> {
    let n = cloud.len();
    if n < 4 {
        return Err(GraspError::DegenerateCloud {
            mask: None,
            reason: format!("{n} points, need at least 4"),
        });
    }
    if cloud.points.iter().flatten().any(|c| !c.is_finite()) {
        return Err(GraspError::DegenerateCloud {
            mask: None,
            reason: "non-finite coordinate".into(),
        });
    }
    let center = cloud.centroid().expect("nonempty");
    let mut cov = [[0.0; 3]; 3];
    for p in &cloud.points {
        let d = linalg::sub(*p, center);
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] += d[i] * d[j];
            }
        }
    }
    for row in cov.iter_mut() {
        for c in row.iter_mut() {
            *c /= n as f64;
        }
    }
    let (vals, vecs) = linalg::jacobi_eigen(&cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let variances = [vals[order[0]], vals[order[1]], vals[order[2]].max(0.0)];
    if !(variances[0] > 0.0) || variances[1] <= RANK_TOLERANCE * variances[0] {
        return Err(GraspError::DegenerateCloud {
            mask: None,
            reason: "covariance rank below 2".into(),
        });
    }
    let col = |j: usize| [vecs[0][j], vecs[1][j], vecs[2][j]];
    let a0 = fix_sign(linalg::normalize(col(order[0])));
    let a1 = col(order[1]);
    // Re-orthogonalize against a0 before fixing the sign.
    let a1 = fix_sign(linalg::normalize(linalg::sub(a1, linalg::scale(a0, linalg::dot(a0, a1)))));
    let a2 = linalg::cross(a0, a1);
    let axes = [a0, a1, a2];

    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &cloud.points {
        let d = linalg::sub(*p, center);
        for i in 0..3 {
            let t = linalg::dot(d, axes[i]);
            lo[i] = lo[i].min(t);
            hi[i] = hi[i].max(t);
        }
    }
    let mut box_center = center;
    let mut extents = [0.0; 3];
    for i in 0..3 {
        extents[i] = hi[i] - lo[i];
        box_center = linalg::add(box_center, linalg::scale(axes[i], 0.5 * (lo[i] + hi[i])));
    }
    Ok(OrientedBBox3 {
        center,
        box_center,
        axes,
        extents,
        variances,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    Top,
    Front,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraspPose {
    pub approach: Approach,
    /// Gripper target in the camera frame.
    pub position: Vec3,
    /// Rotation about the vertical axis: angle of the gripper's reference
    /// direction in the camera x–z plane, measured from +z toward +x.
    pub yaw: f64,
    /// π/2 for a downward (top) approach, 0 for a horizontal one.
    pub pitch: f64,
    /// Widest horizontal footprint extent used by the rule.
    pub width: f64,
    /// Vertical extent used by the rule.
    pub height: f64,
}

/// Top grasp when the footprint is at least as wide as the box is tall,
/// otherwise a horizontal grasp from the camera side.
pub fn decide_grasp(bbox: &OrientedBBox3) -> GraspPose {
    let height = bbox.height();
    let (width, dir) = bbox.footprint();
    if width >= height - TIE_TOLERANCE {
        let top_y = bbox.box_center[1] - 0.5 * height;
        // Fold the footprint direction into (−π/2, π/2]; it is a line, not a heading.
        let mut yaw = dir[0].atan2(dir[1]);
        if yaw > std::f64::consts::FRAC_PI_2 {
            yaw -= std::f64::consts::PI;
        } else if yaw <= -std::f64::consts::FRAC_PI_2 {
            yaw += std::f64::consts::PI;
        }
        GraspPose {
            approach: Approach::Top,
            position: [bbox.center[0], top_y, bbox.center[2]],
            yaw,
            pitch: std::f64::consts::FRAC_PI_2,
            width,
            height,
        }
    } else {
        let horiz = [bbox.center[0], 0.0, bbox.center[2]];
        let d = if linalg::norm(horiz) > 1e-12 {
            linalg::normalize(horiz)
        } else {
            [0.0, 0.0, 1.0]
        };
        let half = 0.5 * bbox.extent_along(d);
        GraspPose {
            approach: Approach::Front,
            position: linalg::sub(bbox.center, linalg::scale(d, half)),
            yaw: d[0].atan2(d[2]),
            pitch: 0.0,
            width,
            height,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraspEstimate {
    pub pose: GraspPose,
    pub bbox: OrientedBBox3,
    /// Mask index of the selected object.
    pub object: usize,
    pub cloud: PointCloud,
}

/// Full pipeline over several object masks. Masks with no valid depth are
/// skipped; the nearest remaining object is grasped.
pub fn estimate_grasp(
    depth: &DepthImage,
    masks: &[ObjectMask],
    k: &CameraIntrinsics,
) -> Result<GraspEstimate, GraspError> {
    let mut clouds = Vec::new();
    let mut indices = Vec::new();
    for (i, m) in masks.iter().enumerate() {
        match deproject(depth, m, k) {
            Ok(c) => {
                clouds.push(c);
                indices.push(i);
            }
            Err(GraspError::EmptyCloud { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    if clouds.is_empty() {
        return Err(GraspError::EmptyCloud { mask: None });
    }
    let pick = closest_object(&clouds)?;
    let object = indices[pick];
    let cloud = clouds.swap_remove(pick);
    let bbox = pca_bbox(&cloud).map_err(|e| match e {
        GraspError::DegenerateCloud { reason, .. } => GraspError::DegenerateCloud {
            mask: Some(object),
            reason,
        },
        other => other,
    })?;
    Ok(GraspEstimate {
        pose: decide_grasp(&bbox),
        bbox,
        object,
        cloud,
    })
}

/// Solid box used by the synthetic depth renderer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSolid {
    pub center: Vec3,
    /// Columns are the box axes (camera frame).
    pub rotation: Mat3,
    /// Full side lengths along the rotation's columns.
    pub size: Vec3,
}

impl BoxSolid {
    /// Entry distance of the ray `t·dir` (from the camera origin) or `None`.
    pub fn ray_hit(&self, dir: Vec3) -> Option<f64> {
        let rt = linalg::transpose(&self.rotation);
        let o = linalg::mat_vec(&rt, linalg::scale(self.center, -1.0));
        let d = linalg::mat_vec(&rt, dir);
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..3 {
            let h = 0.5 * self.size[i];
            if d[i].abs() < 1e-15 {
                if o[i].abs() > h {
                    return None;
                }
                continue;
            }
            let (a, b) = ((-h - o[i]) / d[i], (h - o[i]) / d[i]);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
        (t0 <= t1 && t0 > 0.0).then_some(t0)
    }
}

/// Ray-casts boxes into a depth image (nearest hit wins) and returns one
/// visibility mask per box.
pub fn render_boxes(boxes: &[BoxSolid], k: &CameraIntrinsics) -> (DepthImage, Vec<ObjectMask>) {
    let (w, h) = (k.width, k.height);
    let mut depth = vec![0.0; w * h];
    let mut owner = vec![usize::MAX; w * h];
    for v in 0..h {
        for u in 0..w {
            let dir = [(u as f64 - k.cx) / k.fx, (v as f64 - k.cy) / k.fy, 1.0];
            for (b, solid) in boxes.iter().enumerate() {
                if let Some(t) = solid.ray_hit(dir) {
                    let i = v * w + u;
                    if owner[i] == usize::MAX || t < depth[i] {
                        depth[i] = t;
                        owner[i] = b;
                    }
                }
            }
        }
    }
    let masks = (0..boxes.len())
        .map(|b| ObjectMask {
            width: w,
            height: h,
            bits: owner.iter().map(|&o| o == b).collect(),
        })
        .collect();
    (
        DepthImage {
            width: w,
            height: h,
            depth,
        },
        masks,
    )
}

/// Regular grid of points filling a box (`n` samples per side).
pub fn box_grid_cloud(solid: &BoxSolid, n: [usize; 3]) -> PointCloud {
    let mut pts = Vec::with_capacity(n[0] * n[1] * n[2]);
    let coord = |i: usize, k: usize, size: f64| {
        if k <= 1 {
            0.0
        } else {
            size * (i as f64 / (k - 1) as f64 - 0.5)
        }
    };
    for i in 0..n[0] {
        for j in 0..n[1] {
            for l in 0..n[2] {
                let local = [
                    coord(i, n[0], solid.size[0]),
                    coord(j, n[1], solid.size[1]),
                    coord(l, n[2], solid.size[2]),
                ];
                pts.push(linalg::add(solid.center, linalg::mat_vec(&solid.rotation, local)));
            }
        }
    }
    PointCloud::new(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> CameraIntrinsics {
        CameraIntrinsics {
            fx: 100.0,
            fy: 100.0,
            cx: 32.0,
            cy: 24.0,
            width: 64,
            height: 48,
        }
    }

    fn single_pixel(u: usize, v: usize, d: f64) -> (DepthImage, ObjectMask) {
        let k = k();
        let mut depth = vec![0.0; k.width * k.height];
        let mut bits = vec![false; k.width * k.height];
        depth[v * k.width + u] = d;
        bits[v * k.width + u] = true;
        (
            DepthImage::new(k.width, k.height, depth).unwrap(),
            ObjectMask::new(k.width, k.height, bits).unwrap(),
        )
    }

    #[test]
    fn deproject_principal_point() {
        let (d, m) = single_pixel(32, 24, 1.0);
        assert_eq!(deproject(&d, &m, &k()).unwrap().points, vec![[0.0, 0.0, 1.0]]);
    }

    #[test]
    fn deproject_one_focal_length_right() {
        // u = cx + fx is off-image for this camera; use a wide one.
        let k = CameraIntrinsics {
            width: 160,
            ..k()
        };
        let mut depth = vec![0.0; 160 * 48];
        let mut bits = vec![false; 160 * 48];
        depth[24 * 160 + 132] = 2.0;
        bits[24 * 160 + 132] = true;
        let c = deproject(
            &DepthImage::new(160, 48, depth).unwrap(),
            &ObjectMask::new(160, 48, bits).unwrap(),
            &k,
        )
        .unwrap();
        assert_eq!(c.points, vec![[2.0, 0.0, 2.0]]);
    }

    #[test]
    fn zero_depth_under_mask_is_empty() {
        let (_, m) = single_pixel(3, 3, 1.0);
        let d = DepthImage::new(64, 48, vec![0.0; 64 * 48]).unwrap();
        assert_eq!(deproject(&d, &m, &k()), Err(GraspError::EmptyCloud { mask: None }));
    }

    #[test]
    fn mismatched_dimensions() {
        let d = DepthImage::new(2, 2, vec![1.0; 4]).unwrap();
        let m = ObjectMask::new(2, 1, vec![true; 2]).unwrap();
        assert!(matches!(deproject(&d, &m, &k()), Err(GraspError::DimensionMismatch(_))));
    }

    fn cloud_at(c: Vec3) -> PointCloud {
        PointCloud::new(vec![c])
    }

    #[test]
    fn closest_object_cases() {
        assert_eq!(
            closest_object(&[cloud_at([0.0, 0.0, 0.5]), cloud_at([0.0, 0.0, 1.0])]).unwrap(),
            0
        );
        assert_eq!(
            closest_object(&[cloud_at([0.0, 0.0, 1.0]), cloud_at([1.0, 0.0, 0.0])]).unwrap(),
            0
        );
        // Norms ≈ 0.825, 0.7, 0.866.
        let three = [
            cloud_at([0.2, 0.0, 0.8]),
            cloud_at([0.0, 0.0, 0.7]),
            cloud_at([0.5, 0.5, 0.5]),
        ];
        assert_eq!(closest_object(&three).unwrap(), 1);
        assert_eq!(closest_object(&[]), Err(GraspError::EmptyInput));
    }

    #[test]
    fn degenerate_clouds() {
        let same = PointCloud::new(vec![[0.1, 0.2, 0.3]; 10]);
        assert!(matches!(pca_bbox(&same), Err(GraspError::DegenerateCloud { .. })));
        let line = PointCloud::new((0..10).map(|i| [i as f64 * 0.1, 0.0, 1.0]).collect());
        assert!(matches!(pca_bbox(&line), Err(GraspError::DegenerateCloud { .. })));
        let three = PointCloud::new(vec![[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]);
        assert!(matches!(pca_bbox(&three), Err(GraspError::DegenerateCloud { .. })));
    }

    #[test]
    fn planar_cloud_is_accepted() {
        let plane = PointCloud::new(
            (0..5)
                .flat_map(|i| (0..3).map(move |j| [i as f64 * 0.1, j as f64 * 0.1, 1.0]))
                .collect(),
        );
        let b = pca_bbox(&plane).unwrap();
        assert!(b.extents[2].abs() < 1e-12);
    }

    fn bbox_with(axes: [Vec3; 3], extents: Vec3) -> OrientedBBox3 {
        OrientedBBox3 {
            center: [0.0, 0.0, 1.0],
            box_center: [0.0, 0.0, 1.0],
            axes,
            extents,
            variances: [0.0; 3],
        }
    }

    const X: Vec3 = [1.0, 0.0, 0.0];
    const Y: Vec3 = [0.0, 1.0, 0.0];
    const Z: Vec3 = [0.0, 0.0, 1.0];

    #[test]
    fn wide_box_is_grasped_from_top() {
        let g = decide_grasp(&bbox_with([X, Z, Y], [0.20, 0.08, 0.05]));
        assert_eq!(g.approach, Approach::Top);
        assert!((g.position[1] - (1.0 - 1.0 + -0.025)).abs() < 1e-12);
    }

    #[test]
    fn tall_box_is_grasped_from_front() {
        let g = decide_grasp(&bbox_with([Y, X, Z], [0.20, 0.05, 0.04]));
        assert_eq!(g.approach, Approach::Front);
        assert!((g.position[2] - 0.98).abs() < 1e-12);
    }

    #[test]
    fn tie_goes_to_top() {
        let g = decide_grasp(&bbox_with([X, Y, Z], [0.10, 0.10, 0.0]));
        assert!((g.width - g.height).abs() < 1e-15);
        assert_eq!(g.approach, Approach::Top);
    }

    #[test]
    fn render_then_estimate_picks_near_box() {
        let k = CameraIntrinsics {
            fx: 200.0,
            fy: 200.0,
            cx: 80.0,
            cy: 60.0,
            width: 160,
            height: 120,
        };
        let near = BoxSolid {
            center: [-0.15, 0.05, 0.6],
            rotation: linalg::identity(),
            size: [0.12, 0.04, 0.06],
        };
        let far = BoxSolid {
            center: [0.25, 0.05, 1.2],
            rotation: linalg::identity(),
            size: [0.1, 0.1, 0.1],
        };
        let (depth, masks) = render_boxes(&[far, near], &k);
        let est = estimate_grasp(&depth, &masks, &k).unwrap();
        assert_eq!(est.object, 1);
        assert!((est.bbox.center[2] - 0.6).abs() < 0.05);
        let empty = ObjectMask::new(160, 120, vec![false; 160 * 120]).unwrap();
        assert_eq!(
            estimate_grasp(&depth, &[empty], &k).unwrap_err(),
            GraspError::EmptyCloud { mask: None }
        );
    }
}
