#![allow(dead_code)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use homecore::camera::CameraIntrinsics;
use homecore::geometry::{Point2, Polygon2};
use homecore::grasp::{Approach, BoxSolid};
use homecore::linalg;
use homecore::semantic_map::{Furniture, Room, SemanticMap};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture_bytes(name: &str) -> Vec<u8> {
    std::fs::read(fixture(name)).expect("fixture readable")
}

pub fn corpus() -> Vec<String> {
    String::from_utf8(fixture_bytes("commands.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::to_string)
        .collect()
}

// ---------------------------------------------------------------------------
// Polygon oracles

/// Even-odd crossing test along +x.
pub fn ray_cast(poly: &[Point2], p: Point2) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub fn seg_dist(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.x + t * dx, a.y + t * dy);
    ((p.x - qx).powi(2) + (p.y - qy).powi(2)).sqrt()
}

pub fn boundary_dist(poly: &[Point2], p: Point2) -> f64 {
    (0..poly.len())
        .map(|i| seg_dist(p, poly[i], poly[(i + 1) % poly.len()]))
        .fold(f64::INFINITY, f64::min)
}

/// Convex polygon on a rotated ellipse, 3 to 12 vertices.
pub fn random_convex(rng: &mut ChaCha8Rng) -> Vec<Point2> {
    loop {
        let k = rng.random_range(3..=12);
        let mut angles: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        if angles.windows(2).any(|w| w[1] - w[0] < 1e-3) {
            continue;
        }
        let (rx, ry) = (rng.random_range(0.5..5.0), rng.random_range(0.5..5.0));
        let rot: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let c = Point2::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        let (s, co) = rot.sin_cos();
        let pts: Vec<Point2> = angles
            .iter()
            .map(|a| {
                let (x, y) = (rx * a.cos(), ry * a.sin());
                Point2::new(c.x + co * x - s * y, c.y + s * x + co * y)
            })
            .collect();
        let area: f64 = (0..k)
            .map(|i| pts[i].x * pts[(i + 1) % k].y - pts[(i + 1) % k].x * pts[i].y)
            .sum();
        if area.abs() > 1e-3 {
            return pts;
        }
    }
}

/// Column-stack rectilinear polygon: adjacent columns overlap vertically, so
/// the outline is simple. Randomly transposed.
pub fn random_rectilinear(rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let cols = rng.random_range(2..=8);
    let mut xs = vec![rng.random_range(-5.0..5.0)];
    for _ in 0..cols {
        let last = *xs.last().unwrap();
        xs.push(last + rng.random_range(0.2..1.5));
    }
    let mut spans: Vec<(f64, f64)> = Vec::new();
    while spans.len() < cols {
        let b: f64 = rng.random_range(-3.0..3.0);
        let t: f64 = b + rng.random_range(0.3..4.0);
        if let Some(&(pb, pt)) = spans.last() {
            if b.max(pb) + 0.1 >= t.min(pt) || (b - pb).abs() < 1e-3 || (t - pt).abs() < 1e-3 {
                continue;
            }
        }
        spans.push((b, t));
    }
    let mut pts = vec![Point2::new(xs[0], spans[0].0)];
    for i in 0..cols {
        pts.push(Point2::new(xs[i + 1], spans[i].0));
        if i + 1 < cols {
            pts.push(Point2::new(xs[i + 1], spans[i + 1].0));
        }
    }
    for i in (0..cols).rev() {
        pts.push(Point2::new(xs[i + 1], spans[i].1));
        pts.push(Point2::new(xs[i], spans[i].1));
    }
    if rng.random_bool(0.5) {
        pts = pts.into_iter().map(|p| Point2::new(p.y, p.x)).collect();
    }
    pts
}

pub fn random_query(rng: &mut ChaCha8Rng, poly: &[Point2]) -> Point2 {
    let (mut lo, mut hi) = (poly[0], poly[0]);
    for p in poly {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    loop {
        let p = Point2::new(
            rng.random_range(lo.x - 1.0..hi.x + 1.0),
            rng.random_range(lo.y - 1.0..hi.y + 1.0),
        );
        if boundary_dist(poly, p) > 1e-6 {
            return p;
        }
    }
}

// ---------------------------------------------------------------------------
// Navigation fixtures

pub fn rect(cx: f64, cy: f64, w: f64, d: f64, yaw: f64) -> Vec<Point2> {
    let (s, c) = yaw.sin_cos();
    [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]
        .iter()
        .map(|(u, v)| {
            let (x, y) = (u * w, v * d);
            Point2::new(cx + c * x - s * y, cy + s * x + c * y)
        })
        .collect()
}

pub struct NavFixture {
    pub map: SemanticMap,
    pub room: Vec<Point2>,
    pub furniture: Vec<Vec<Point2>>,
    pub standoff: f64,
}

/// Candidate goals per edge of a counter-clockwise contour: (goal, midpoint, edge length).
pub fn edge_goals(contour: &[Point2], standoff: f64) -> Vec<(Point2, Point2, f64)> {
    let n = contour.len();
    (0..n)
        .map(|i| {
            let (a, b) = (contour[i], contour[(i + 1) % n]);
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let len = dx.hypot(dy);
            let m = Point2::new(a.x + 0.5 * dx, a.y + 0.5 * dy);
            (Point2::new(m.x + standoff * dy / len, m.y - standoff * dx / len), m, len)
        })
        .collect()
}

/// One room with a target table (`furniture[0]`) and up to two other pieces;
/// regenerated until the oracle finds at least one feasible edge.
pub fn nav_fixture(rng: &mut ChaCha8Rng) -> NavFixture {
    loop {
        let room = random_convex(rng);
        let standoff = rng.random_range(0.3..0.8);
        let mut furniture: Vec<Vec<Point2>> = Vec::new();
        let mut circles: Vec<(Point2, f64)> = Vec::new();
        let extra = rng.random_range(0..=2);
        for _ in 0..200 {
            if furniture.len() > extra {
                break;
            }
            let (w, d): (f64, f64) = (rng.random_range(0.3..1.6), rng.random_range(0.3..1.0));
            let r = 0.5 * w.hypot(d);
            let c = random_query(rng, &room);
            let margin = if furniture.is_empty() { r + standoff + 0.05 } else { r + 0.01 };
            if !ray_cast(&room, c) || boundary_dist(&room, c) < margin {
                continue;
            }
            if circles.iter().any(|(o, ro)| o.distance(c) < r + ro + 0.01) {
                continue;
            }
            circles.push((c, r));
            furniture.push(rect(c.x, c.y, w, d, rng.random_range(0.0..std::f64::consts::PI)));
        }
        if furniture.is_empty() {
            continue;
        }
        let feasible = edge_goals(&furniture[0], standoff)
            .iter()
            .any(|(g, _, _)| ray_cast(&room, *g) && furniture.iter().all(|f| !ray_cast(f, *g)));
        if !feasible {
            continue;
        }
        let Ok(contour) = Polygon2::new(room.clone()) else { continue };
        let rooms = vec![Room {
            name: "room".into(),
            contour,
        }];
        let items = furniture
            .iter()
            .enumerate()
            .map(|(i, f)| Furniture {
                name: if i == 0 { "target".into() } else { format!("other_{i}") },
                room: "room".into(),
                contour: Polygon2::new(f.clone()).unwrap(),
            })
            .collect();
        if let Ok(map) = SemanticMap::new(rooms, items, vec![]) {
            return NavFixture {
                map,
                room,
                furniture,
                standoff,
            };
        }
    }
}

// ---------------------------------------------------------------------------
// Grasp scenes

pub fn grasp_intrinsics() -> CameraIntrinsics {
    CameraIntrinsics {
        fx: 300.0,
        fy: 300.0,
        cx: 159.5,
        cy: 119.5,
        width: 320,
        height: 240,
    }
}

pub struct GraspScene {
    pub boxes: Vec<BoxSolid>,
    pub nearest: usize,
    pub expected: Approach,
}

/// Expected approach from the true box: footprint diagonal against height.
pub fn rule_table(size: [f64; 3]) -> Approach {
    if size[0].hypot(size[2]) >= size[1] {
        Approach::Top
    } else {
        Approach::Front
    }
}

fn upright_box(center: [f64; 3], size: [f64; 3], yaw: f64) -> BoxSolid {
    BoxSolid {
        center,
        rotation: linalg::axis_angle([0.0, 1.0, 0.0], yaw),
        size,
    }
}

fn random_size(rng: &mut ChaCha8Rng, wide: bool) -> [f64; 3] {
    if wide {
        [rng.random_range(0.12..0.25), rng.random_range(0.03..0.08), rng.random_range(0.06..0.15)]
    } else {
        [rng.random_range(0.04..0.07), rng.random_range(0.2..0.3), rng.random_range(0.04..0.07)]
    }
}

fn random_yaw(rng: &mut ChaCha8Rng) -> f64 {
    let y = rng.random_range(20f64.to_radians()..70f64.to_radians());
    if rng.random_bool(0.5) {
        y
    } else {
        -y
    }
}

/// Two upright boxes, one near and one far, on opposite sides of the view.
/// Scene 0 puts a long flat tray in front.
pub fn grasp_scene(rng: &mut ChaCha8Rng, index: usize) -> GraspScene {
    let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let near_size = if index == 0 {
        [0.30, 0.04, 0.12]
    } else {
        let wide = rng.random_bool(0.5);
        random_size(rng, wide)
    };
    let far_wide = rng.random_bool(0.5);
    let far_size = random_size(rng, far_wide);
    let near = upright_box(
        [
            side * rng.random_range(0.06..0.14),
            rng.random_range(0.0..0.08),
            rng.random_range(0.8..1.0),
        ],
        near_size,
        random_yaw(rng),
    );
    let far = upright_box(
        [
            -side * rng.random_range(0.15..0.3),
            rng.random_range(0.0..0.08),
            rng.random_range(1.4..1.8),
        ],
        far_size,
        random_yaw(rng),
    );
    let (boxes, nearest) = if rng.random_bool(0.5) {
        (vec![near, far], 0)
    } else {
        (vec![far, near], 1)
    };
    GraspScene {
        boxes,
        nearest,
        expected: rule_table(near_size),
    }
}

// ---------------------------------------------------------------------------
// Mock chat endpoint

#[derive(Debug, Clone)]
pub enum Reply {
    Body(String),
    /// Accept the request and never answer.
    Hang,
}

#[derive(Debug, Clone)]
pub struct Received {
    pub authorization: Option<String>,
    pub body: String,
}

pub struct MockServer {
    pub url: String,
    pub received: Arc<Mutex<Vec<Received>>>,
}

/// Serves the scripted replies in order, one per connection.
pub fn mock_server(replies: Vec<Reply>) -> MockServer {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/chat", listener.local_addr().unwrap());
    let received = Arc::new(Mutex::new(Vec::new()));
    let log = received.clone();
    std::thread::spawn(move || {
        for reply in replies {
            let Ok((stream, _)) = listener.accept() else { return };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut len = 0usize;
            let mut auth = None;
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap_or(0) == 0 {
                    break;
                }
                let l = line.trim_end();
                if l.is_empty() {
                    break;
                }
                if let Some((k, v)) = l.split_once(':') {
                    match k.to_ascii_lowercase().as_str() {
                        "content-length" => len = v.trim().parse().unwrap_or(0),
                        "authorization" => auth = Some(v.trim().to_string()),
                        _ => {}
                    }
                }
            }
            let mut body = vec![0; len];
            let _ = reader.read_exact(&mut body);
            log.lock().unwrap().push(Received {
                authorization: auth,
                body: String::from_utf8_lossy(&body).into_owned(),
            });
            let mut stream = stream;
            match reply {
                Reply::Body(b) => {
                    let _ = write!(
                        stream,
                        "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{b}",
                        b.len()
                    );
                }
                Reply::Hang => {
                    std::thread::sleep(Duration::from_secs(5));
                }
            }
        }
    });
    MockServer { url, received }
}

/// A chat-completions style envelope around `content`.
pub fn chat_envelope(content: &str) -> String {
    serde_json::json!({"choices": [{"message": {"role": "assistant", "content": content}}]}).to_string()
}
