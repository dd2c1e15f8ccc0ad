use serde::{Deserialize, Serialize};

use super::{ObjectModel, SceneConfig, ScenePose, SceneSample};
use crate::camera::{Camera, Projection};
use crate::linalg::{self, Vec3};

/// Objects with fewer visible vertex samples than this fraction are dropped.
pub const VISIBILITY_THRESHOLD: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    /// Index into the sample's poses.
    pub object: usize,
    pub class_id: u32,
    /// `[cx, cy, w, h]` normalized by image size.
    pub bbox: [f64; 4],
}

/// Ray parameter range `(0, limit)` against an axis-aligned box; true when
/// the open segment `origin + t·dir` enters the box.
fn segment_hits_box(origin: Vec3, dir: Vec3, lo: Vec3, hi: Vec3, limit: f64) -> bool {
    let mut t0 = 0.0f64;
    let mut t1 = limit;
    for i in 0..3 {
        if dir[i].abs() < 1e-15 {
            if origin[i] < lo[i] || origin[i] > hi[i] {
                return false;
            }
            continue;
        }
        let a = (lo[i] - origin[i]) / dir[i];
        let b = (hi[i] - origin[i]) / dir[i];
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
        if t0 > t1 {
            return false;
        }
    }
    t0 < t1
}

fn world_vertices(pose: &ScenePose, model: &ObjectModel) -> Vec<Vec3> {
    model.vertices.iter().map(|&v| pose.to_world(v)).collect()
}

fn in_image(camera: &Camera, u: f64, v: f64) -> bool {
    let k = &camera.intrinsics;
    (0.0..=k.width as f64).contains(&u) && (0.0..=k.height as f64).contains(&v)
}

/// Fraction of object `index`'s vertices that project inside the image with
/// an unobstructed line of sight to the camera.
pub fn visible_fraction(sample: &SceneSample, config: &SceneConfig, index: usize) -> f64 {
    let pose = &sample.poses[index];
    let Some(model) = config.model(pose.class_id) else {
        return 0.0;
    };
    let eye = sample.camera.position;
    let occluders: Vec<(&ScenePose, (Vec3, Vec3))> = sample
        .poses
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != index)
        .filter_map(|(_, p)| config.model(p.class_id).map(|m| (p, m.bounds())))
        .collect();
    let verts = world_vertices(pose, model);
    let visible = verts
        .iter()
        .filter(|&&w| match sample.camera.project(w) {
            Projection::BehindCamera => false,
            Projection::Pixel { u, v, .. } => {
                in_image(&sample.camera, u, v)
                    && occluders.iter().all(|(p, (lo, hi))| {
                        let o = p.to_model(eye);
                        let d = linalg::sub(p.to_model(w), o);
                        !segment_hits_box(o, d, *lo, *hi, 1.0 - 1e-9)
                    })
            }
        })
        .count();
    visible as f64 / verts.len() as f64
}

/// Clipped, normalized box of the projected hull, or `None` when any vertex
/// is behind the camera or the clipped box is empty.
pub fn projected_bbox(camera: &Camera, pose: &ScenePose, model: &ObjectModel) -> Option<[f64; 4]> {
    let k = &camera.intrinsics;
    let (w, h) = (k.width as f64, k.height as f64);
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for v in world_vertices(pose, model) {
        match camera.project(v) {
            Projection::BehindCamera => return None,
            Projection::Pixel { u, v, .. } => {
                lo = [lo[0].min(u), lo[1].min(v)];
                hi = [hi[0].max(u), hi[1].max(v)];
            }
        }
    }
    let (x0, x1) = (lo[0].clamp(0.0, w), hi[0].clamp(0.0, w));
    let (y0, y1) = (lo[1].clamp(0.0, h), hi[1].clamp(0.0, h));
    if x1 <= x0 || y1 <= y0 {
        return None;
    }
    Some([
        (x0 + x1) / 2.0 / w,
        (y0 + y1) / 2.0 / h,
        (x1 - x0) / w,
        (y1 - y0) / h,
    ])
}

/// Labels every sufficiently visible object, in pose order.
pub fn annotate(sample: &SceneSample, config: &SceneConfig) -> Vec<Annotation> {
    let mut out = Vec::new();
    for (i, pose) in sample.poses.iter().enumerate() {
        let Some(model) = config.model(pose.class_id) else {
            continue;
        };
        let Some(bbox) = projected_bbox(&sample.camera, pose, model) else {
            continue;
        };
        if visible_fraction(sample, config, i) < config.visibility_threshold {
            continue;
        }
        out.push(Annotation {
            object: i,
            class_id: pose.class_id,
            bbox,
        });
    }
    out
}
