use super::{SceneConfig, SceneSample};
use crate::camera::Projection;
use crate::geometry::{Point2, Polygon2};
use crate::render::{Raster, Rgb};
use crate::rng::splitmix64;

/// Dark gray keyed by the floor texture id.
fn background_color(id: u32) -> Rgb {
    let g = 24 + (splitmix64(id as u64) % 64) as u8;
    [g, g, g.saturating_add(8)]
}

/// Bright color keyed by class id; never collides with a background shade.
pub fn class_color(class_id: u32) -> Rgb {
    let h = splitmix64(0x636c_6173_7300 ^ class_id as u64);
    [
        128 + (h & 0x7f) as u8,
        128 + ((h >> 8) & 0x7f) as u8,
        128 + ((h >> 16) & 0x7f) as u8,
    ]
}

/// Andrew's monotone chain; returns the CCW hull without collinear points.
fn convex_hull(mut pts: Vec<Point2>) -> Vec<Point2> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point2, a: Point2, b: Point2| a.sub(o).cross(b.sub(o));
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Flat-shaded painter's-algorithm preview of the projected hulls,
/// far objects first.
pub fn render_preview(sample: &SceneSample, config: &SceneConfig) -> Raster {
    let k = &sample.camera.intrinsics;
    let mut raster = Raster::filled(k.width, k.height, background_color(sample.backgrounds.floor));
    let mut order: Vec<(f64, usize)> = sample
        .poses
        .iter()
        .enumerate()
        .map(|(i, p)| (sample.camera.to_camera_frame(p.position)[2], i))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, i) in order {
        let pose = &sample.poses[i];
        let Some(model) = config.model(pose.class_id) else {
            continue;
        };
        let mut pts = Vec::with_capacity(model.vertices.len());
        for &v in &model.vertices {
            match sample.camera.project(pose.to_world(v)) {
                Projection::Pixel { u, v, .. } => pts.push(Point2::new(u, v)),
                Projection::BehindCamera => {
                    pts.clear();
                    break;
                }
            }
        }
        if let Ok(poly) = Polygon2::new(convex_hull(pts)) {
            raster.fill_polygon(&poly, class_color(pose.class_id));
        }
    }
    raster
}
