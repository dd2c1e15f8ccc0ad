//! Domain-randomized synthetic scenes with automatic detection labels.
//!
//! Each sample places catalog objects on the floor of a box-shaped room,
//! samples a camera aimed at the object cluster together with lighting and
//! floor/wall/ceiling texture ids, then projects the object hulls to produce
//! normalized `class cx cy w h` boxes. No renderer is involved: lighting and
//! textures are recorded as metadata and previews are flat-shaded.

mod annotate;
mod dataset;
mod preview;

pub use annotate::{annotate, projected_bbox, visible_fraction, Annotation, VISIBILITY_THRESHOLD};
pub use dataset::{generate_dataset, label_text, Manifest, ManifestEntry};
pub use preview::render_preview;

use crate::camera::{Camera, CameraIntrinsics};
use crate::linalg::{self, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Placement attempts per object before it is dropped.
pub const PLACEMENT_TRIES: usize = 100;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("infeasible config: {0}")]
    InfeasibleConfig(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectModel {
    pub class_id: u32,
    pub class_name: String,
    /// Hull corners in the model frame (z up), meters.
    pub vertices: Vec<Vec3>,
}

impl ObjectModel {
    /// Box resting on the floor, centered on the model origin in x/y.
    pub fn cuboid(class_id: u32, class_name: &str, size: Vec3) -> Self {
        let [sx, sy, sz] = size;
        let mut vertices = Vec::with_capacity(8);
        for z in [0.0, sz] {
            for (x, y) in [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)] {
                vertices.push([x * sx, y * sy, z]);
            }
        }
        Self {
            class_id,
            class_name: class_name.into(),
            vertices,
        }
    }

    /// Regular prism standing on the floor (cans, bottles, cups).
    pub fn prism(class_id: u32, class_name: &str, radius: f64, height: f64, sides: usize) -> Self {
        let mut vertices = Vec::with_capacity(2 * sides);
        for z in [0.0, height] {
            for k in 0..sides {
                let a = std::f64::consts::TAU * k as f64 / sides as f64;
                vertices.push([radius * a.cos(), radius * a.sin(), z]);
            }
        }
        Self {
            class_id,
            class_name: class_name.into(),
            vertices,
        }
    }

    /// Model-frame axis-aligned bounds, used as the occluding solid.
    pub fn bounds(&self) -> (Vec3, Vec3) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for i in 0..3 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    fn validate(&self) -> Result<(), SceneError> {
        if self.vertices.len() < 4 {
            return Err(SceneError::InvalidConfig(format!(
                "object `{}` needs at least 4 vertices",
                self.class_name
            )));
        }
        let v0 = self.vertices[0];
        let spans_volume = self.vertices.iter().any(|&a| {
            self.vertices.iter().any(|&b| {
                self.vertices.iter().any(|&c| {
                    let n = linalg::cross(linalg::sub(a, v0), linalg::sub(b, v0));
                    linalg::dot(n, linalg::sub(c, v0)).abs() > 1e-12
                })
            })
        });
        if !spans_volume {
            return Err(SceneError::InvalidConfig(format!(
                "object `{}` vertices are coplanar",
                self.class_name
            )));
        }
        Ok(())
    }
}

/// Closed interval `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range<T> {
    pub min: T,
    pub max: T,
}

impl<T: PartialOrd + Copy + std::fmt::Debug> Range<T> {
    pub const fn new(min: T, max: T) -> Self {
        Self { min, max }
    }

    fn check(&self, name: &str) -> Result<(), SceneError> {
        if self.min <= self.max {
            Ok(())
        } else {
            Err(SceneError::InvalidConfig(format!("{name}: min {:?} > max {:?}", self.min, self.max)))
        }
    }
}

fn sample_f64(rng: &mut ChaCha8Rng, r: Range<f64>) -> f64 {
    if r.min == r.max {
        r.min
    } else {
        rng.random_range(r.min..=r.max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneConfig {
    /// Room width (x), depth (y) and height (z), meters.
    pub room: Vec3,
    /// Keep-out band along the walls, meters.
    pub wall_margin: f64,
    pub catalog: Vec<ObjectModel>,
    pub objects_per_scene: Range<usize>,
    /// Minimum center-to-center floor distance between objects, meters.
    pub min_spacing: f64,
    pub intrinsics: CameraIntrinsics,
    pub camera_distance: Range<f64>,
    pub camera_height: Range<f64>,
    /// Pitch offset from the aimed direction, radians.
    pub camera_pitch: Range<f64>,
    pub light_intensity: Range<f64>,
    pub light_temperature: Range<f64>,
    pub floor_textures: Vec<u32>,
    pub wall_textures: Vec<u32>,
    pub ceiling_textures: Vec<u32>,
    pub visibility_threshold: f64,
    pub seed: u64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            room: [4.0, 4.0, 2.5],
            wall_margin: 0.3,
            catalog: vec![
                ObjectModel::prism(0, "cup", 0.04, 0.10, 12),
                ObjectModel::prism(1, "bottle", 0.035, 0.25, 12),
                ObjectModel::cuboid(2, "cracker_box", [0.16, 0.06, 0.21]),
                ObjectModel::prism(3, "can", 0.033, 0.12, 12),
                ObjectModel::cuboid(4, "sponge", [0.10, 0.07, 0.03]),
                ObjectModel::cuboid(5, "basket", [0.35, 0.25, 0.20]),
            ],
            objects_per_scene: Range::new(1, 6),
            min_spacing: 0.3,
            intrinsics: CameraIntrinsics {
                fx: 525.0,
                fy: 525.0,
                cx: 319.5,
                cy: 239.5,
                width: 640,
                height: 480,
            },
            camera_distance: Range::new(1.2, 2.5),
            camera_height: Range::new(0.6, 1.6),
            camera_pitch: Range::new(-0.08, 0.08),
            light_intensity: Range::new(0.3, 1.0),
            light_temperature: Range::new(2700.0, 6500.0),
            floor_textures: (0..8).collect(),
            wall_textures: (0..8).collect(),
            ceiling_textures: (0..4).collect(),
            visibility_threshold: VISIBILITY_THRESHOLD,
            seed: 0,
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<(), SceneError> {
        let bad = |m: &str| Err(SceneError::InvalidConfig(m.into()));
        if self.room.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return bad("room extents must be positive");
        }
        if 2.0 * self.wall_margin >= self.room[0].min(self.room[1]) || self.wall_margin < 0.0 {
            return bad("wall margin leaves no floor area");
        }
        if self.catalog.is_empty() && self.objects_per_scene.max > 0 {
            return bad("catalog is empty");
        }
        let mut ids: Vec<u32> = self.catalog.iter().map(|o| o.class_id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return bad("class ids must be unique");
        }
        for o in &self.catalog {
            o.validate()?;
        }
        self.objects_per_scene.check("objects_per_scene")?;
        self.camera_distance.check("camera_distance")?;
        self.camera_height.check("camera_height")?;
        self.camera_pitch.check("camera_pitch")?;
        self.light_intensity.check("light_intensity")?;
        self.light_temperature.check("light_temperature")?;
        if self.camera_distance.min <= 0.0 {
            return bad("camera distance must be positive");
        }
        if self.floor_textures.is_empty()
            || self.wall_textures.is_empty()
            || self.ceiling_textures.is_empty()
        {
            return bad("texture id sets must be nonempty");
        }
        if !(0.0..=1.0).contains(&self.visibility_threshold) {
            return bad("visibility_threshold must be in [0, 1]");
        }
        self.intrinsics
            .validate()
            .map_err(|e| SceneError::InvalidConfig(e.to_string()))
    }

    pub fn model(&self, class_id: u32) -> Option<&ObjectModel> {
        self.catalog.iter().find(|o| o.class_id == class_id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenePose {
    pub class_id: u32,
    /// World position of the model origin (z up), meters.
    pub position: Vec3,
    /// Rotation about world z, radians.
    pub yaw: f64,
}

impl ScenePose {
    pub fn to_world(&self, v: Vec3) -> Vec3 {
        let (s, c) = self.yaw.sin_cos();
        [
            c * v[0] - s * v[1] + self.position[0],
            s * v[0] + c * v[1] + self.position[1],
            v[2] + self.position[2],
        ]
    }

    /// World point → model frame.
    pub fn to_model(&self, p: Vec3) -> Vec3 {
        let d = linalg::sub(p, self.position);
        let (s, c) = self.yaw.sin_cos();
        [c * d[0] + s * d[1], -s * d[0] + c * d[1], d[2]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lighting {
    pub intensity: f64,
    pub temperature_k: f64,
    /// Direction of the key light, radians.
    pub azimuth: f64,
    pub elevation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Backgrounds {
    pub floor: u32,
    pub wall: u32,
    pub ceiling: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSample {
    pub scene_id: u64,
    pub seed: u64,
    pub poses: Vec<ScenePose>,
    pub camera: Camera,
    pub lighting: Lighting,
    pub backgrounds: Backgrounds,
    pub annotations: Vec<Annotation>,
}

/// Per-sample seed; the stream depends only on `(config.seed, index)`.
pub fn sample_seed(config: &SceneConfig, index: u64) -> u64 {
    crate::rng::stream_seed(config.seed, index)
}

/// Draws a randomized scene (without annotations).
pub fn sample_scene(config: &SceneConfig, index: u64) -> Result<SceneSample, SceneError> {
    config.validate()?;
    let seed = sample_seed(config, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = config.objects_per_scene;
    let count = if range.min == range.max {
        range.min
    } else {
        rng.random_range(range.min..=range.max)
    };
    let m = config.wall_margin;
    let [rw, rd, _] = config.room;
    let mut poses: Vec<ScenePose> = Vec::with_capacity(count);
    for _ in 0..count {
        let model = &config.catalog[rng.random_range(0..config.catalog.len())];
        let yaw = rng.random_range(0.0..std::f64::consts::TAU);
        for _ in 0..PLACEMENT_TRIES {
            let x = rng.random_range(m..=rw - m);
            let y = rng.random_range(m..=rd - m);
            let clear = poses.iter().all(|p| {
                (p.position[0] - x).hypot(p.position[1] - y) >= config.min_spacing
            });
            if clear {
                poses.push(ScenePose {
                    class_id: model.class_id,
                    position: [x, y, 0.0],
                    yaw,
                });
                break;
            }
        }
    }
    if poses.len() < range.min {
        return Err(SceneError::InfeasibleConfig(format!(
            "placed {} objects at spacing {} m, need at least {}",
            poses.len(),
            config.min_spacing,
            range.min
        )));
    }

    let target = if poses.is_empty() {
        [rw / 2.0, rd / 2.0, 0.0]
    } else {
        let n = poses.len() as f64;
        let s = poses.iter().fold([0.0; 3], |a, p| linalg::add(a, p.position));
        [s[0] / n, s[1] / n, 0.05]
    };
    let azimuth = rng.random_range(0.0..std::f64::consts::TAU);
    let distance = sample_f64(&mut rng, config.camera_distance);
    let height = sample_f64(&mut rng, config.camera_height);
    let pitch = sample_f64(&mut rng, config.camera_pitch);
    let eye = [
        target[0] + distance * azimuth.cos(),
        target[1] + distance * azimuth.sin(),
        height,
    ];
    let mut camera = Camera::look_at(config.intrinsics, eye, target, [0.0, 0.0, 1.0]);
    if pitch != 0.0 {
        // Tilt about the camera's own x axis.
        let tilt = linalg::axis_angle([1.0, 0.0, 0.0], pitch);
        camera.rotation = linalg::mat_mul(&tilt, &camera.rotation);
    }

    let lighting = Lighting {
        intensity: sample_f64(&mut rng, config.light_intensity),
        temperature_k: sample_f64(&mut rng, config.light_temperature),
        azimuth: rng.random_range(0.0..std::f64::consts::TAU),
        elevation: rng.random_range(0.2..1.5),
    };
    let pick = |rng: &mut ChaCha8Rng, ids: &[u32]| ids[rng.random_range(0..ids.len())];
    let backgrounds = Backgrounds {
        floor: pick(&mut rng, &config.floor_textures),
        wall: pick(&mut rng, &config.wall_textures),
        ceiling: pick(&mut rng, &config.ceiling_textures),
    };
    Ok(SceneSample {
        scene_id: index,
        seed,
        poses,
        camera,
        lighting,
        backgrounds,
        annotations: Vec::new(),
    })
}

/// Samples and annotates scene `index`.
pub fn annotated_scene(config: &SceneConfig, index: u64) -> Result<SceneSample, SceneError> {
    let mut s = sample_scene(config, index)?;
    s.annotations = annotate(&s, config);
    Ok(s)
}
