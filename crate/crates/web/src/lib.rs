//! Browser demo over the `homecore` library. Every operation has a plain
//! Rust entry point returning `Result<_, String>` so it can be tested
//! natively; the `#[wasm_bindgen]` wrappers only convert errors.

use homecore::camera::CameraIntrinsics;
use homecore::geometry::Point2;
use homecore::grasp::{estimate_grasp, render_boxes, BoxSolid};
use homecore::linalg;
use homecore::render::{assign_colors, render_svg};
use homecore::scenegen::{annotated_scene, render_preview, SceneConfig};
use homecore::semantic_map::SemanticMap;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Pixel margin the map renderer leaves around the drawing.
pub const MAP_MARGIN: f64 = 10.0;

/// Small camera used for the grasp demo.
pub fn demo_intrinsics() -> CameraIntrinsics {
    CameraIntrinsics {
        fx: 200.0,
        fy: 200.0,
        cx: 119.5,
        cy: 89.5,
        width: 240,
        height: 180,
    }
}

fn parse_map(map_json: &str) -> Result<SemanticMap, String> {
    SemanticMap::from_json(map_json.as_bytes()).map_err(|e| e.to_string())
}

/// SVG drawing plus what the page needs to map clicks back to meters.
pub fn map_svg(map_json: &str, color_seed: u64, px_per_m: f64) -> Result<String, String> {
    if !(px_per_m > 0.0 && px_per_m.is_finite()) {
        return Err(format!("scale must be positive, got {px_per_m}"));
    }
    let map = parse_map(map_json)?;
    let (lo, hi) = map.bounds().ok_or("map is empty")?;
    let svg = render_svg(&map, &assign_colors(&map, color_seed), px_per_m);
    Ok(json!({
        "svg": svg,
        "lo": [lo.x, lo.y],
        "hi": [hi.x, hi.y],
        "scale": px_per_m,
        "margin": MAP_MARGIN,
    })
    .to_string())
}

/// Room containing `(x, y)` plus the furniture under it, if any.
pub fn map_locate(map_json: &str, x: f64, y: f64) -> Result<String, String> {
    let map = parse_map(map_json)?;
    let p = Point2::new(x, y);
    let loc = map.locate(p);
    let furniture: Vec<&str> = map
        .furniture()
        .iter()
        .filter(|f| f.contour.contains(p))
        .map(|f| f.name.as_str())
        .collect();
    Ok(json!({
        "x": x,
        "y": y,
        "room": loc.room,
        "diagnostic": loc.diagnostic,
        "furniture": furniture,
    })
    .to_string())
}

pub fn map_navgoal(map_json: &str, target: &str, standoff: f64) -> Result<String, String> {
    let map = parse_map(map_json)?;
    let goal = map
        .navigation_point(target, standoff)
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&goal).map_err(|e| e.to_string())
}

fn demo_box(width: f64, height: f64, depth: f64, yaw_deg: f64) -> Result<BoxSolid, String> {
    for (name, v) in [("width", width), ("height", height), ("depth", depth)] {
        if !(0.01..=0.6).contains(&v) {
            return Err(format!("{name} must be within [0.01, 0.6] m, got {v}"));
        }
    }
    if !yaw_deg.is_finite() {
        return Err("yaw must be finite".into());
    }
    Ok(BoxSolid {
        center: [0.0, 0.1, 1.0],
        rotation: linalg::axis_angle([0.0, 1.0, 0.0], yaw_deg.to_radians()),
        size: [width, height, depth],
    })
}

/// Renders one upright box seen from slightly above and runs the grasp
/// pipeline on the synthetic depth image.
pub fn grasp_box(width: f64, height: f64, depth: f64, yaw_deg: f64) -> Result<String, String> {
    let solid = demo_box(width, height, depth, yaw_deg)?;
    let k = demo_intrinsics();
    let (img, masks) = render_boxes(&[solid], &k);
    let est = estimate_grasp(&img, &masks, &k).map_err(|e| e.to_string())?;
    Ok(json!({
        "approach": est.pose.approach,
        "position": est.pose.position,
        "yaw_deg": est.pose.yaw.to_degrees(),
        "pitch_deg": est.pose.pitch.to_degrees(),
        "footprint": est.pose.width,
        "height": est.pose.height,
        "points": est.cloud.len(),
        "extents": est.bbox.extents,
    })
    .to_string())
}

/// Depth image of the grasp demo box as RGBA, near = bright.
pub fn grasp_depth_rgba(width: f64, height: f64, depth: f64, yaw_deg: f64) -> Result<Vec<u8>, String> {
    let solid = demo_box(width, height, depth, yaw_deg)?;
    let k = demo_intrinsics();
    let (img, _) = render_boxes(&[solid], &k);
    let mut out = Vec::with_capacity(k.width * k.height * 4);
    for v in 0..k.height {
        for u in 0..k.width {
            let d = img.at(u, v);
            let g = if d > 0.0 {
                (255.0 * (1.6 - d).clamp(0.0, 1.0)) as u8
            } else {
                0
            };
            out.extend_from_slice(&[g, g, g, 255]);
        }
    }
    Ok(out)
}

/// Preview raster of one generated scene as RGBA plus its labels.
pub struct ScenePreview {
    pub width: usize,
    pub height: usize,
    pub rgba: Vec<u8>,
    pub labels: String,
}

pub fn scene_preview(seed: u64, index: u64) -> Result<ScenePreview, String> {
    let cfg = SceneConfig {
        seed,
        ..SceneConfig::default()
    };
    let sample = annotated_scene(&cfg, index).map_err(|e| e.to_string())?;
    let raster = render_preview(&sample, &cfg);
    let rgba = raster
        .pixels
        .iter()
        .flat_map(|p| [p[0], p[1], p[2], 255])
        .collect();
    let labels: Vec<_> = sample
        .annotations
        .iter()
        .map(|a| {
            let name = cfg.model(a.class_id).map(|m| m.class_name.as_str()).unwrap_or("?");
            json!({"class_id": a.class_id, "class": name, "bbox": a.bbox})
        })
        .collect();
    Ok(ScenePreview {
        width: raster.width,
        height: raster.height,
        rgba,
        labels: json!({
            "scene_id": sample.scene_id,
            "objects": sample.poses.len(),
            "width": raster.width,
            "height": raster.height,
            "labels": labels,
        })
        .to_string(),
    })
}

fn js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = renderMap)]
pub fn render_map_js(map_json: &str, color_seed: u32, px_per_m: f64) -> Result<String, JsValue> {
    js(map_svg(map_json, color_seed.into(), px_per_m))
}

#[wasm_bindgen(js_name = locate)]
pub fn locate_js(map_json: &str, x: f64, y: f64) -> Result<String, JsValue> {
    js(map_locate(map_json, x, y))
}

#[wasm_bindgen(js_name = navgoal)]
pub fn navgoal_js(map_json: &str, target: &str, standoff: f64) -> Result<String, JsValue> {
    js(map_navgoal(map_json, target, standoff))
}

#[wasm_bindgen(js_name = graspBox)]
pub fn grasp_box_js(width: f64, height: f64, depth: f64, yaw_deg: f64) -> Result<String, JsValue> {
    js(grasp_box(width, height, depth, yaw_deg))
}

#[wasm_bindgen(js_name = graspDepth)]
pub fn grasp_depth_js(width: f64, height: f64, depth: f64, yaw_deg: f64) -> Result<Vec<u8>, JsValue> {
    js(grasp_depth_rgba(width, height, depth, yaw_deg))
}

#[wasm_bindgen(js_name = graspImageSize)]
pub fn grasp_image_size_js() -> Vec<u32> {
    let k = demo_intrinsics();
    vec![k.width as u32, k.height as u32]
}

#[wasm_bindgen(js_name = scenePixels)]
pub fn scene_pixels_js(seed: u32, index: u32) -> Result<Vec<u8>, JsValue> {
    js(scene_preview(seed.into(), index.into()).map(|p| p.rgba))
}

#[wasm_bindgen(js_name = sceneLabels)]
pub fn scene_labels_js(seed: u32, index: u32) -> Result<String, JsValue> {
    js(scene_preview(seed.into(), index.into()).map(|p| p.labels))
}
