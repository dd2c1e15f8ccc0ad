//! Random per-area colors and PPM/SVG renderings of a semantic map.

use crate::geometry::{Point2, Polygon2};
use crate::semantic_map::SemanticMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Minimum Euclidean RGB distance between two area colors.
pub const MIN_COLOR_DISTANCE: f64 = 32.0;
const MAX_REDRAWS: usize = 10_000;

pub type Rgb = [u8; 3];

/// Area key → color. Keys are `room:<name>`, `furniture:<name>` and `door:<name>`.
pub type ColorTable = BTreeMap<String, Rgb>;

pub fn color_distance(a: Rgb, b: Rgb) -> f64 {
    let d = |i: usize| a[i] as f64 - b[i] as f64;
    (d(0) * d(0) + d(1) * d(1) + d(2) * d(2)).sqrt()
}

fn area_keys(map: &SemanticMap) -> Vec<String> {
    map.rooms()
        .iter()
        .map(|r| format!("room:{}", r.name))
        .chain(map.furniture().iter().map(|f| format!("furniture:{}", f.name)))
        .chain(map.doors().iter().map(|d| format!("door:{}", d.name)))
        .collect()
}

/// Draws a color per area, re-drawing whenever a candidate falls within
/// [`MIN_COLOR_DISTANCE`] of an already assigned color.
pub fn assign_colors(map: &SemanticMap, seed: u64) -> ColorTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assigned: Vec<Rgb> = Vec::new();
    let mut table = ColorTable::new();
    for key in area_keys(map) {
        let mut best: Option<(Rgb, f64)> = None;
        for _ in 0..MAX_REDRAWS {
            let c: Rgb = [rng.random(), rng.random(), rng.random()];
            let nearest = assigned
                .iter()
                .map(|&a| color_distance(a, c))
                .fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(_, d)| nearest > d) {
                best = Some((c, nearest));
            }
            if nearest >= MIN_COLOR_DISTANCE {
                break;
            }
        }
        // The palette saturates only with thousands of areas; keep the most distant draw.
        let (c, _) = best.expect("at least one draw");
        assigned.push(c);
        table.insert(key, c);
    }
    table
}

#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Rgb>,
}

impl Raster {
    pub fn filled(width: usize, height: usize, color: Rgb) -> Self {
        Self {
            width,
            height,
            pixels: vec![color; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        self.pixels[y * self.width + x] = c;
    }

    /// Paints every pixel whose center `(x + 0.5, y + 0.5)` lies in `poly`
    /// (pixel coordinates).
    pub fn fill_polygon(&mut self, poly: &Polygon2, color: Rgb) {
        let (lo, hi) = poly.bounds();
        let x0 = (lo.x - 0.5).ceil().max(0.0) as usize;
        let y0 = (lo.y - 0.5).ceil().max(0.0) as usize;
        let x1 = ((hi.x - 0.5).floor() + 1.0).clamp(0.0, self.width as f64) as usize;
        let y1 = ((hi.y - 0.5).floor() + 1.0).clamp(0.0, self.height as f64) as usize;
        for y in y0..y1 {
            for x in x0..x1 {
                if poly.contains(Point2::new(x as f64 + 0.5, y as f64 + 0.5)) {
                    self.set(x, y, color);
                }
            }
        }
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        crate::imageio::encode_ppm(self.width, self.height, &self.pixels)
    }
}

/// World → pixel mapping with y flipped so north is up.
struct View {
    lo: Point2,
    hi: Point2,
    scale: f64,
    margin: f64,
}

impl View {
    fn new(map: &SemanticMap, px_per_m: f64) -> Self {
        let (lo, hi) = map
            .bounds()
            .unwrap_or((Point2::default(), Point2::new(1.0, 1.0)));
        Self {
            lo,
            hi,
            scale: px_per_m,
            margin: 10.0,
        }
    }

    fn size(&self) -> (usize, usize) {
        let w = ((self.hi.x - self.lo.x) * self.scale + 2.0 * self.margin).ceil() as usize;
        let h = ((self.hi.y - self.lo.y) * self.scale + 2.0 * self.margin).ceil() as usize;
        (w.max(1), h.max(1))
    }

    fn px(&self, p: Point2) -> Point2 {
        Point2::new(
            (p.x - self.lo.x) * self.scale + self.margin,
            (self.hi.y - p.y) * self.scale + self.margin,
        )
    }

    fn poly(&self, poly: &Polygon2) -> Polygon2 {
        Polygon2::new(poly.vertices().iter().map(|&p| self.px(p)).collect())
            .expect("similarity transform keeps polygons simple")
    }
}

const BACKGROUND: Rgb = [255, 255, 255];
const DEFAULT_COLOR: Rgb = [128, 128, 128];

fn layers(map: &SemanticMap) -> Vec<(String, &str, &Polygon2)> {
    map.rooms()
        .iter()
        .map(|r| (format!("room:{}", r.name), r.name.as_str(), &r.contour))
        .chain(
            map.furniture()
                .iter()
                .map(|f| (format!("furniture:{}", f.name), f.name.as_str(), &f.contour)),
        )
        .chain(
            map.doors()
                .iter()
                .map(|d| (format!("door:{}", d.name), d.name.as_str(), &d.contour)),
        )
        .collect()
}

/// Rooms first, then furniture and doors on top.
pub fn render_raster(map: &SemanticMap, colors: &ColorTable, px_per_m: f64) -> Raster {
    let view = View::new(map, px_per_m);
    let (w, h) = view.size();
    let mut img = Raster::filled(w, h, BACKGROUND);
    for (key, _, poly) in layers(map) {
        let c = colors.get(&key).copied().unwrap_or(DEFAULT_COLOR);
        img.fill_polygon(&view.poly(poly), c);
    }
    img
}

pub fn render_svg(map: &SemanticMap, colors: &ColorTable, px_per_m: f64) -> String {
    let view = View::new(map, px_per_m);
    let (w, h) = view.size();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    for (key, name, poly) in layers(map) {
        let c = colors.get(&key).copied().unwrap_or(DEFAULT_COLOR);
        let pts: Vec<String> = view
            .poly(poly)
            .vertices()
            .iter()
            .map(|p| format!("{:.2},{:.2}", p.x, p.y))
            .collect();
        let _ = writeln!(
            s,
            r##"<polygon data-area="{}" points="{}" fill="#{:02x}{:02x}{:02x}" stroke="#333" stroke-width="1"/>"##,
            xml_escape(&key),
            pts.join(" "),
            c[0],
            c[1],
            c[2]
        );
        let centroid = view.px(poly.centroid());
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            centroid.x,
            centroid.y,
            xml_escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
